#include "mtsc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mtsc {

std::string source_name(std::size_t index) { return "Y" + std::to_string(index); }
std::string encoder_name(std::size_t index) { return "U" + std::to_string(index); }
std::string reproduction_name(std::size_t index) { return "Z" + std::to_string(index); }

double DistortionTable::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

SourceModel::SourceModel(std::size_t encoders, JointPmf joint,
                         std::vector<DistortionTable> distortions)
    : encoders_(encoders), joint_(std::move(joint)), distortions_(std::move(distortions)) {
  if (encoders_ == 0) throw std::invalid_argument("SourceModel: need at least one encoder");
  const auto& vars = joint_.variables();
  if (vars.size() != encoders_ + 2) {
    throw std::invalid_argument("SourceModel: joint must cover Y0..Y" +
                                std::to_string(encoders_ + 1));
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name != source_name(i)) {
      throw std::invalid_argument("SourceModel: variable " + std::to_string(i) +
                                  " must be named " + source_name(i));
    }
  }
  for (std::size_t k = 0; k < distortions_.size(); ++k) {
    const auto& d = distortions_[k];
    if (d.z_size == 0) throw std::invalid_argument("SourceModel: empty reproduction alphabet");
    if (d.values.size() != joint_.entry_count() * d.z_size) {
      throw std::invalid_argument("SourceModel: distortion table " + std::to_string(k + 1) +
                                  " has wrong size");
    }
    for (double v : d.values) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("SourceModel: distortion values must be finite and >= 0");
      }
    }
  }
}

const DistortionTable& SourceModel::distortion(std::size_t k) const {
  if (k >= distortions_.size()) {
    throw std::out_of_range("distortion index " + std::to_string(k) + " out of range");
  }
  return distortions_[k];
}

std::size_t SourceModel::observation_size(std::size_t ell) const {
  return joint_.variables().at(ell).size;
}

VarSet SourceModel::sources() const {
  VarSet s;
  for (const auto& v : joint_.variables()) s.push_back(v.name);
  return s;
}

VarSet SourceModel::observations() const {
  return observations((1u << encoders_) - 1u);
}

VarSet SourceModel::observations(unsigned mask) const {
  VarSet s;
  for (std::size_t l = 1; l <= encoders_; ++l) {
    if (mask & (1u << (l - 1))) s.push_back(source_name(l));
  }
  return s;
}

std::string SourceModel::side_information() const { return source_name(encoders_ + 1); }

std::vector<Variable> SourceModel::reproductions() const {
  std::vector<Variable> z;
  for (std::size_t k = 0; k < distortions_.size(); ++k) {
    z.push_back({reproduction_name(k + 1), distortions_[k].z_size});
  }
  return z;
}

bool MarkovReport::pass() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [](const MarkovResidual& r) { return r.pass; });
}

double MarkovReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : residuals) m = std::max(m, r.residual);
  return m;
}

std::string MarkovReport::describe() const {
  std::ostringstream os;
  os.precision(9);
  bool first = true;
  for (const auto& r : residuals) {
    if (!first) os << "; ";
    first = false;
    os << r.condition << " = " << r.residual << (r.pass ? " ok" : " FAIL");
  }
  return os.str();
}

namespace {

void expect_variable(const Variable& got, const std::string& name, std::size_t size,
                     const std::string& where) {
  if (got.name != name || got.size != size) {
    throw std::invalid_argument(where + ": expected input " + name + " of size " +
                                std::to_string(size) + ", got " + got.name + " of size " +
                                std::to_string(got.size));
  }
}

VarSet encoder_outputs(std::size_t encoders, unsigned mask) {
  VarSet s;
  for (std::size_t l = 1; l <= encoders; ++l) {
    if (mask & (1u << (l - 1))) s.push_back(encoder_name(l));
  }
  return s;
}

MarkovResidual residual(const JointPmf& joint, std::string label, const VarSet& a,
                        const VarSet& b, const VarSet& c) {
  MarkovResidual r;
  r.condition = std::move(label);
  r.residual = std::max(0.0, conditional_mutual_information(joint, a, b, c));
  r.pass = r.residual <= kMarkovTolerance;
  return r;
}

std::string names(const VarSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i];
  return out;
}

}  // namespace

void validate_aux_system(const SourceModel& model, const AuxSystem& gamma) {
  const auto& wt = gamma.wt.variables();
  if (wt.size() != 2 || wt[0].name != "W" || wt[1].name != "T") {
    throw std::invalid_argument("AuxSystem: wt pmf must be over (W, T)");
  }
  const std::size_t L = model.encoders();
  if (gamma.encoders.size() != L) {
    throw std::invalid_argument("AuxSystem: expected " + std::to_string(L) +
                                " encoder kernels, got " + std::to_string(gamma.encoders.size()));
  }
  for (std::size_t l = 1; l <= L; ++l) {
    const auto& ch = gamma.encoders[l - 1];
    const std::string where = "encoder kernel " + std::to_string(l);
    if (ch.inputs().size() != 3) throw std::invalid_argument(where + ": needs inputs (Y, W, T)");
    expect_variable(ch.inputs()[0], source_name(l), model.observation_size(l), where);
    expect_variable(ch.inputs()[1], "W", wt[0].size, where);
    expect_variable(ch.inputs()[2], "T", wt[1].size, where);
    if (ch.output().name != encoder_name(l)) {
      throw std::invalid_argument(where + ": output must be named " + encoder_name(l));
    }
  }
  const auto& dec = gamma.decoder;
  if (dec.inputs().size() != L + 2) {
    throw std::invalid_argument("decoder kernel: needs inputs (U1..UL, Y" +
                                std::to_string(L + 1) + ", T)");
  }
  for (std::size_t l = 1; l <= L; ++l) {
    expect_variable(dec.inputs()[l - 1], encoder_name(l), gamma.encoders[l - 1].output().size,
                    "decoder kernel");
  }
  expect_variable(dec.inputs()[L], model.side_information(), model.observation_size(L + 1),
                  "decoder kernel");
  expect_variable(dec.inputs()[L + 1], "T", wt[1].size, "decoder kernel");
  const auto z = model.reproductions();
  if (dec.output().name != "Z" || dec.output().size != alphabet_product(z)) {
    throw std::invalid_argument("decoder kernel: output must be Z of size " +
                                std::to_string(alphabet_product(z)));
  }
}

void validate_x_channel(const SourceModel& model, const XChannel& x) {
  for (const auto& in : x.kernel.inputs()) {
    if (!model.joint().contains(in.name) || model.joint().size_of(in.name) != in.size) {
      throw std::invalid_argument("X kernel input '" + in.name +
                                  "' is not a source variable of matching size");
    }
  }
  if (x.kernel.output().name != "X") {
    throw std::invalid_argument("X kernel output must be named X");
  }
}

JointPmf build_full_joint(const SourceModel& model, const std::optional<XChannel>& x,
                          const AuxSystem& gamma) {
  validate_aux_system(model, gamma);
  JointPmf joint = model.joint();
  if (x) {
    validate_x_channel(model, *x);
    joint = extend(joint, x->kernel);
  }
  joint = product(joint, gamma.wt);
  for (const auto& enc : gamma.encoders) joint = extend(joint, enc);
  if (model.distortion_count() == 0) return joint;

  joint = extend(joint, gamma.decoder);
  auto vars = joint.variables();
  vars.pop_back();
  for (const auto& z : model.reproductions()) vars.push_back(z);
  return joint.relabeled(std::move(vars));
}

MarkovReport check_gamma_class(const SourceModel& model, const std::optional<XChannel>& x,
                               const AuxSystem& gamma, GammaClass cls) {
  return check_gamma_class(model, x, build_full_joint(model, x, gamma), cls);
}

MarkovReport check_gamma_class(const SourceModel& model, const std::optional<XChannel>& x,
                               const JointPmf& joint, GammaClass cls) {
  const std::size_t L = model.encoders();
  const unsigned all = (1u << L) - 1u;
  const VarSet sources = model.sources();
  const VarSet u_all = encoder_outputs(L, all);
  VarSet z_all;
  for (const auto& z : model.reproductions()) z_all.push_back(z.name);

  const bool outer = cls == GammaClass::kOuter;
  const VarSet mix = outer ? VarSet{"W", "T"} : VarSet{"T"};

  MarkovReport report;
  report.residuals.push_back(
      residual(joint, "(i) I(" + names(mix) + ";sources)", mix, sources, {}));

  for (std::size_t l = 1; l <= L; ++l) {
    const unsigned others = all & ~(1u << (l - 1));
    VarSet rest{source_name(0)};
    for (const auto& y : model.observations(others)) rest.push_back(y);
    rest.push_back(model.side_information());
    if (cls != GammaClass::kBergerTungOuter) {
      for (const auto& u : encoder_outputs(L, others)) rest.push_back(u);
    }
    const VarSet given = join({source_name(l)}, mix);
    report.residuals.push_back(residual(joint,
                                        "(ii) I(" + encoder_name(l) + ";" + names(rest) + "|" +
                                            names(given) + ")",
                                        {encoder_name(l)}, rest, given));
  }

  if (!z_all.empty()) {
    VarSet left = join({source_name(0)}, model.observations());
    if (outer) left.push_back("W");
    const VarSet given = join(join(u_all, {model.side_information()}), {"T"});
    report.residuals.push_back(residual(
        joint, "(iii) I(" + names(left) + ";Z|" + names(given) + ")", left, z_all, given));
  }

  if (x) {
    VarSet aux = join(u_all, z_all);
    aux.push_back("W");
    aux.push_back("T");
    report.residuals.push_back(
        residual(joint, "coupling I(X;" + names(aux) + "|sources)", {"X"}, aux, sources));
  }
  return report;
}

MarkovReport check_chi(const SourceModel& model, const XChannel& x) {
  validate_x_channel(model, x);
  const JointPmf joint = extend(model.joint(), x.kernel);
  const std::size_t L = model.encoders();
  const VarSet given{"X", model.side_information()};

  MarkovReport report;
  double total = 0.0;
  for (std::size_t l = 2; l <= L; ++l) {
    const auto r = residual(joint, "I(Y" + std::to_string(l) + ";Y1..Y" +
                                       std::to_string(l - 1) + "|X,Y" +
                                       std::to_string(L + 1) + ")",
                            {source_name(l)}, model.observations((1u << (l - 1)) - 1u), given);
    total += r.residual;
    report.residuals.push_back(r);
  }
  MarkovResidual sum;
  sum.condition = "chi total";
  sum.residual = total;
  sum.pass = total <= kMarkovTolerance;
  report.residuals.push_back(sum);
  return report;
}

double expected_distortion(const SourceModel& model, const AuxSystem& gamma, std::size_t k) {
  model.distortion(k);
  return expected_distortion(model, build_full_joint(model, std::nullopt, gamma), k);
}

double expected_distortion(const SourceModel& model, const JointPmf& full_joint,
                           std::size_t k) {
  const auto& table = model.distortion(k);
  const JointPmf m =
      marginalize(full_joint, join(model.sources(), {reproduction_name(k + 1)}));
  double e = 0.0;
  for (std::size_t i = 0; i < m.entry_count(); ++i) e += m[i] * table.values[i];
  return e;
}

AuxSystem fold_w_into_t(const AuxSystem& gamma) {
  const std::size_t nw = gamma.w_size();
  const std::size_t nt = gamma.t_size();
  const std::size_t nt2 = nw * nt;
  // new T index = w * nt + t, which is exactly the flat (W, T) index
  JointPmf wt({{"W", 1}, {"T", nt2}},
              std::vector<double>(gamma.wt.probs().begin(), gamma.wt.probs().end()));

  std::vector<Channel> encoders;
  for (const auto& enc : gamma.encoders) {
    // rows were (y, w, t) row-major; (y, t') with t' = w*nt + t is the same order
    auto inputs = enc.inputs();
    inputs[1] = {"W", 1};
    inputs[2] = {"T", nt2};
    encoders.emplace_back(std::move(inputs), enc.output(), enc.rows());
  }

  const auto& dec = gamma.decoder;
  const std::size_t prefix = dec.row_count() / nt;  // (u, y{L+1}) tuples
  std::vector<std::vector<double>> rows;
  rows.reserve(prefix * nt2);
  for (std::size_t r = 0; r < prefix; ++r) {
    for (std::size_t w = 0; w < nw; ++w) {
      for (std::size_t t = 0; t < nt; ++t) rows.push_back(dec.rows()[r * nt + t]);
    }
  }
  auto dec_inputs = dec.inputs();
  dec_inputs.back() = {"T", nt2};
  return AuxSystem{std::move(wt), std::move(encoders),
                   Channel(std::move(dec_inputs), dec.output(), std::move(rows))};
}

}  // namespace mtsc
