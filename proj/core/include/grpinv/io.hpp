#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "grpinv/additive.hpp"
#include "grpinv/blockmat.hpp"
#include "grpinv/gen.hpp"
#include "grpinv/ginv.hpp"
#include "grpinv/matrix.hpp"

namespace grpinv {

using Json = nlohmann::json;
using Instance = std::variant<AdditiveScenario, BlockScenario>;

// Where a generated instance came from; enough to regenerate it bit for bit.
struct Provenance {
  std::string generator;  // e.g. "gen_T21"
  std::uint64_t seed = 0;
  GeneratorConfig config;
};

struct InstanceFile {
  Instance instance;
  std::optional<Provenance> provenance;
};

// {"rows": m, "cols": n, "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
// Throws Parse on missing fields, non-positive dims, length mismatch,
// malformed entries, or NaN/Inf.
ComplexMatrix matrix_from_json(const Json& j);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
// "2", "-0.5", "1+i", "0.5-2i", "i" or "re,im". Throws Parse.
Complex parse_complex(std::string_view text);

Json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const Json& j);

std::string theorem_tag(const Instance& inst);
Complex instance_lambda(const Instance& inst);
Index instance_dimension(const Instance& inst);

// Additive: {"theorem", "lambda", "a", "b"}; block: {"theorem", "lambda",
// "A", "B", "C", "D"}; optional "provenance".
Json instance_to_json(const Instance& inst,
                      const std::optional<Provenance>& prov = std::nullopt);
InstanceFile instance_from_json(const Json& j);

Json ginv_result_to_json(const GroupInverseResult& r);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace grpinv
