#include "grpinv/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "grpinv/error.hpp"

namespace grpinv {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::Parse, what);
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    parse_error(std::string("missing field \"") + name + "\"");
  }
  return j.at(name);
}

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) parse_error(std::string(what) + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(std::string(what) + " is not finite");
  return v;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {finite_number(j, "scalar"), 0.0};
  if (!j.is_array() || j.size() != 2) {
    parse_error("complex value must be [re, im]");
  }
  return {finite_number(j[0], "real part"), finite_number(j[1], "imaginary part")};
}

Complex parse_complex(std::string_view text) {
  const std::string s(text);
  auto bad = [&]() -> Complex { parse_error("cannot parse \"" + s + "\" as a complex number"); };
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      bad();
    }
    if (used != t.size() || !std::isfinite(v)) bad();
    return v;
  };
  if (s.empty()) return bad();
  if (const auto comma = s.find(','); comma != std::string::npos) {
    return {number(s.substr(0, comma)), number(s.substr(comma + 1))};
  }
  if (s.back() != 'i') return {number(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
        body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return number(t);
  };
  if (split == std::string::npos) return {0.0, imag(body)};
  return {number(body.substr(0, split)), imag(body.substr(split))};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (const auto& z : m.entries()) data.push_back(complex_to_json(z));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j) try {
  const auto& rows = field(j, "rows");
  const auto& cols = field(j, "cols");
  const auto& data = field(j, "data");
  if (!rows.is_number_integer() || !cols.is_number_integer() ||
      rows.get<long long>() < 1 || cols.get<long long>() < 1) {
    parse_error("rows and cols must be positive integers");
  }
  const auto m = static_cast<Index>(rows.get<long long>());
  const auto n = static_cast<Index>(cols.get<long long>());
  if (!data.is_array() || static_cast<Index>(data.size()) != m * n) {
    parse_error("data must hold rows*cols = " + std::to_string(m * n) +
                " entries");
  }
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (const auto& e : data) entries.push_back(complex_from_json(e));
  return ComplexMatrix(m, n, entries);
} catch (const Json::exception& e) {
  parse_error(std::string("malformed matrix: ") + e.what());
}

Json provenance_to_json(const Provenance& p) {
  Json cfg = {{"dims", p.config.dims},
              {"lambda", complex_to_json(p.config.lambda)},
              {"seed", p.config.seed},
              {"cond_bound", p.config.cond_bound}};
  if (p.generator == "gen_C23") cfg["mode"] = std::string(to_string(p.config.mode));
  return {{"generator", p.generator}, {"seed", p.seed}, {"config", cfg}};
}

Provenance provenance_from_json(const Json& j) {
  Provenance p;
  p.generator = field(j, "generator").get<std::string>();
  p.seed = field(j, "seed").get<std::uint64_t>();
  const auto& cfg = field(j, "config");
  p.config.dims = field(cfg, "dims").get<std::vector<Index>>();
  p.config.lambda = complex_from_json(field(cfg, "lambda"));
  p.config.seed = field(cfg, "seed").get<std::uint64_t>();
  p.config.cond_bound = finite_number(field(cfg, "cond_bound"), "cond_bound");
  if (cfg.contains("mode")) {
    p.config.mode = cfg.at("mode").get<std::string>() == "orthogonal"
                        ? C23Mode::Orthogonal
                        : C23Mode::Commuting;
  }
  return p;
}

std::string theorem_tag(const Instance& inst) {
  return std::visit(
      [](const auto& s) { return std::string(to_string(s.theorem)); }, inst);
}

Complex instance_lambda(const Instance& inst) {
  return std::visit([](const auto& s) { return s.lambda; }, inst);
}

Index instance_dimension(const Instance& inst) {
  if (const auto* a = std::get_if<AdditiveScenario>(&inst)) return a->a.rows();
  return std::get<BlockScenario>(inst).n();
}

Json instance_to_json(const Instance& inst, const std::optional<Provenance>& prov) {
  Json j;
  if (const auto* a = std::get_if<AdditiveScenario>(&inst)) {
    j = {{"theorem", std::string(to_string(a->theorem))},
         {"lambda", complex_to_json(a->lambda)},
         {"a", matrix_to_json(a->a)},
         {"b", matrix_to_json(a->b)}};
  } else {
    const auto& s = std::get<BlockScenario>(inst);
    j = {{"theorem", std::string(to_string(s.theorem))},
         {"lambda", complex_to_json(s.lambda)},
         {"A", matrix_to_json(s.A)},
         {"B", matrix_to_json(s.B)},
         {"C", matrix_to_json(s.C)},
         {"D", matrix_to_json(s.D)}};
  }
  if (prov) j["provenance"] = provenance_to_json(*prov);
  return j;
}

InstanceFile instance_from_json(const Json& j) try {
  const auto& tag_json = field(j, "theorem");
  if (!tag_json.is_string()) parse_error("theorem must be a string");
  const auto tag = tag_json.get<std::string>();
  const Complex lambda = complex_from_json(field(j, "lambda"));

  InstanceFile out;
  if (auto t = parse_additive_theorem(tag)) {
    AdditiveScenario s{*t, lambda, matrix_from_json(field(j, "a")),
                       matrix_from_json(field(j, "b"))};
    if (!s.a.is_square() || !same_shape(s.a, s.b)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "operands a and b must be square and of equal size");
    }
    out.instance = std::move(s);
  } else if (auto bt = parse_block_theorem(tag)) {
    BlockScenario s{*bt, lambda, matrix_from_json(field(j, "A")),
                    matrix_from_json(field(j, "B")),
                    matrix_from_json(field(j, "C")),
                    matrix_from_json(field(j, "D"))};
    const auto n = s.A.rows();
    for (const auto* m : {&s.A, &s.B, &s.C, &s.D}) {
      if (m->rows() != n || m->cols() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "blocks A, B, C, D must all be n x n");
      }
    }
    out.instance = std::move(s);
  } else {
    throw Error(ErrorCode::UnknownTheorem, "unknown theorem tag \"" + tag + "\"");
  }
  if (j.contains("provenance")) {
    out.provenance = provenance_from_json(j.at("provenance"));
  }
  return out;
} catch (const Json::exception& e) {
  parse_error(std::string("malformed instance: ") + e.what());
}

Json ginv_result_to_json(const GroupInverseResult& r) {
  return {{"ginv", matrix_to_json(r.ginv)},
          {"rank", r.rank},
          {"rank_square", r.rank_square},
          {"group_projector", matrix_to_json(r.group_projector)},
          {"spectral_projector", matrix_to_json(r.spectral_projector)},
          {"diagnostics",
           {{"core_condition", r.core_condition}, {"marginal", r.marginal}}}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace grpinv
