#include "mtsc/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <system_error>

namespace mtsc {

namespace {

// nlohmann reports the byte count read when the error was detected.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

template <typename F>
auto with_context(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
}

Json variable_json(const Variable& v) { return {{"name", v.name}, {"size", v.size}}; }

Variable variable_from_json(const Json& j) {
  return {j.at("name").get<std::string>(), j.at("size").get<std::size_t>()};
}

std::vector<Variable> variables_from_json(const Json& j) {
  std::vector<Variable> vars;
  for (const auto& v : j) vars.push_back(variable_from_json(v));
  return vars;
}

Json variables_json(const std::vector<Variable>& vars) {
  Json arr = Json::array();
  for (const auto& v : vars) arr.push_back(variable_json(v));
  return arr;
}

double round_digits(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  double out = value;
  std::from_chars(buf, res.ptr, out);
  return out;
}

}  // namespace

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string msg = e.what();
    // drop nlohmann's "[json.exception.parse_error.101] parse error at ...: " prefix
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw FormatError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                      msg);
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

Json to_json(const JointPmf& pmf) {
  return {{"variables", variables_json(pmf.variables())},
          {"probs", std::vector<double>(pmf.probs().begin(), pmf.probs().end())}};
}

Json to_json(const Channel& channel) {
  return {{"inputs", variables_json(channel.inputs())},
          {"output", variable_json(channel.output())},
          {"rows", channel.rows()}};
}

Json to_json(const SourceModel& model) {
  Json d = Json::array();
  for (const auto& t : model.distortions()) d.push_back({{"z_size", t.z_size}, {"table", t.values}});
  return {{"encoders", model.encoders()}, {"joint", to_json(model.joint())}, {"distortions", d}};
}

Json to_json(const AuxSystem& gamma) {
  Json enc = Json::array();
  for (const auto& c : gamma.encoders) enc.push_back(to_json(c));
  return {{"wt", to_json(gamma.wt)}, {"encoders", enc}, {"decoder", to_json(gamma.decoder)}};
}

JointPmf joint_pmf_from_json(const Json& j) {
  return with_context("joint pmf", [&] {
    return JointPmf(variables_from_json(j.at("variables")),
                    j.at("probs").get<std::vector<double>>());
  });
}

Channel channel_from_json(const Json& j) {
  return with_context("channel", [&] {
    return Channel(variables_from_json(j.at("inputs")), variable_from_json(j.at("output")),
                   j.at("rows").get<std::vector<std::vector<double>>>());
  });
}

SourceModel source_model_from_json(const Json& j) {
  return with_context("source model", [&] {
    std::vector<DistortionTable> tables;
    for (const auto& d : j.at("distortions")) {
      tables.push_back({d.at("z_size").get<std::size_t>(), d.at("table").get<std::vector<double>>()});
    }
    if (j.contains("K") && j.at("K").get<std::size_t>() != tables.size()) {
      throw std::invalid_argument("K differs from the number of distortion tables");
    }
    return SourceModel(j.at("encoders").get<std::size_t>(), joint_pmf_from_json(j.at("joint")),
                       std::move(tables));
  });
}

AuxSystem aux_system_from_json(const Json& j) {
  return with_context("auxiliary system", [&] {
    std::vector<Channel> enc;
    for (const auto& c : j.at("encoders")) enc.push_back(channel_from_json(c));
    return AuxSystem{joint_pmf_from_json(j.at("wt")), std::move(enc),
                     channel_from_json(j.at("decoder"))};
  });
}

XChannel x_channel_from_json(const Json& j) { return XChannel{channel_from_json(j)}; }

std::string format_number(double value, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

double NumberStyle::rate(double nats) const {
  return round_digits(bits ? nats / std::numbers::ln2 : nats, digits);
}

double NumberStyle::plain(double value) const { return round_digits(value, digits); }

std::string NumberStyle::format_rate(double nats) const {
  return format_number(bits ? nats / std::numbers::ln2 : nats, digits);
}

std::string NumberStyle::format_plain(double value) const { return format_number(value, digits); }

Json to_json(const RegionConstraints& constraints, const NumberStyle& style) {
  const std::string key = style.bits ? "bound_bits" : "bound_nats";
  Json list = Json::array();
  for (SubsetMask a = 1; a <= constraints.full_mask(); ++a) {
    list.push_back({{"A", subset_label(a, constraints.encoders)},
                    {key, style.rate(constraints.bound(a))}});
  }
  Json d = Json::array();
  for (double v : constraints.distortions) d.push_back(style.plain(v));
  return {{"L", constraints.encoders},
          {"K", constraints.distortions.size()},
          {"constraints", list},
          {"distortions", d}};
}

std::string to_csv(const RegionConstraints& constraints, const NumberStyle& style) {
  std::string out = "subset,bound\n";
  for (SubsetMask a = 1; a <= constraints.full_mask(); ++a) {
    out += subset_label(a, constraints.encoders) + "," + style.format_rate(constraints.bound(a)) +
           "\n";
  }
  return out;
}

std::string to_csv(const std::vector<CurvePoint>& curve, const NumberStyle& style) {
  std::string out = style.bits ? "D,L,sum_rate_bits\n" : "D,L,sum_rate_nats\n";
  for (const auto& p : curve) {
    out += style.format_plain(p.distortion) + "," + std::to_string(p.encoders) + "," +
           style.format_rate(p.sum_rate) + "\n";
  }
  return out;
}

}  // namespace mtsc
