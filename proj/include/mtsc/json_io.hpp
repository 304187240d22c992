#pragma once

// JSON and CSV formats. Model and system files use full double precision
// so they read back bit-for-bit; reports go through NumberStyle.
//
//   JointPmf    {"variables": [{"name": "Y1", "size": 3}, ...], "probs": [...]}
//   Channel     {"inputs": [{"name", "size"}, ...], "output": {"name", "size"},
//                "rows": [[...], ...]}
//   SourceModel {"encoders": L, "joint": JointPmf,
//                "distortions": [{"z_size": n, "table": [...]}, ...]}
//   AuxSystem   {"wt": JointPmf, "encoders": [Channel, ...], "decoder": Channel}
//   XChannel    Channel with output "X"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mtsc/erasure.hpp"
#include "mtsc/model.hpp"
#include "mtsc/regions.hpp"

namespace mtsc {

using Json = nlohmann::json;

/// Malformed input; the message carries "source:line:column: " for syntax
/// errors.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text, reporting syntax errors with 1-based line and column.
Json parse_json(std::string_view text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Json to_json(const JointPmf& pmf);
Json to_json(const Channel& channel);
Json to_json(const SourceModel& model);
Json to_json(const AuxSystem& gamma);

JointPmf joint_pmf_from_json(const Json& j);
Channel channel_from_json(const Json& j);
SourceModel source_model_from_json(const Json& j);
AuxSystem aux_system_from_json(const Json& j);
XChannel x_channel_from_json(const Json& j);

/// Display conversion for reported quantities: optional division by ln 2
/// and rounding to `digits` significant digits.
struct NumberStyle {
  bool bits = false;
  int digits = 9;

  double rate(double nats) const;  // converted and rounded
  double plain(double value) const;  // rounded only
  std::string format_rate(double nats) const;
  std::string format_plain(double value) const;
};

/// Shortest decimal text of `value` at `digits` significant digits,
/// independent of locale.
std::string format_number(double value, int digits);

/// {"L", "K", "unit", "constraints": [{"A": "0b011", "bound": x}, ...],
///  "distortions": [...]}; the bound key is "bound_nats" or "bound_bits".
Json to_json(const RegionConstraints& constraints, const NumberStyle& style);
/// Header "subset,bound" and one row per nonempty subset.
std::string to_csv(const RegionConstraints& constraints, const NumberStyle& style);

/// Header "D,L,sum_rate_nats" (or sum_rate_bits).
std::string to_csv(const std::vector<CurvePoint>& curve, const NumberStyle& style);

}  // namespace mtsc
