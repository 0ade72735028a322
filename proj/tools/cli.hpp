#pragma once

// grassorth command-line front end. run_cli() holds all logic so tests can drive it
// in-process; main.cpp only forwards argv.
//
// Exit codes: 0 pass / complete, 1 verification failure, 2 usage or input error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grassorth/grassorth.hpp"

namespace grassorth::cli {

enum class Format { Json, Csv };

struct RunConfig {
  std::string mode = "float";
  double tol = kDefaultTol;
  size_t samples = 1000;
  size_t trials = 100;
  uint64_t seed = 0;
  std::string out;
  std::string format = "json";

  bool exact() const { return mode == "exact"; }
  Format fmt() const { return format == "csv" ? Format::Csv : Format::Json; }
};

struct MapSource {
  std::string file;
  std::string builtin;
  size_t s = 2;
  size_t rp = 2;
  size_t sp = 0;  // 0: smallest admissible target for the builtin
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::optional<uint64_t> env_seed() {
  const char* v = std::getenv("GRASSORTH_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  uint64_t out = 0;
  const char* end = v + std::char_traits<char>::length(v);
  const auto [ptr, ec] = std::from_chars(v, end, out);
  if (ec != std::errc() || ptr != end) throw UsageError(std::string("GRASSORTH_SEED is not an unsigned integer: ") + v);
  return out;
}

template <Scalar T>
PolyMatrixMap<T> load_map(const MapSource& src) {
  if (!src.file.empty()) {
    if (!src.builtin.empty()) throw UsageError("give either a map file or --builtin, not both");
    std::ifstream in(src.file);
    if (!in) throw UsageError("cannot open map file '" + src.file + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::ParseError, std::string("map file is not valid JSON: ") + e.what());
    }
    return map_from_json<T>(j);
  }
  if (src.builtin == "standard") {
    const size_t sp = src.sp == 0 ? src.s + src.rp - 1 : src.sp;
    return standard_embedding<T>(src.s, src.rp, sp);
  }
  if (src.builtin == "whitney") {
    if (src.sp != 0 && src.sp != 2 * src.s + src.rp - 2)
      throw UsageError("whitney target is fixed at s' = 2s + r' - 2");
    return whitney_map<T>(src.s, src.rp);
  }
  if (src.builtin == "constant") {
    const size_t sp = src.sp == 0 ? src.rp : src.sp;
    return constant_shilov_map<T>(src.s, src.rp, sp);
  }
  if (src.builtin.empty()) throw UsageError("no map given: pass a map file or --builtin standard|whitney|constant");
  throw UsageError("unknown builtin '" + src.builtin + "' (expected standard, whitney or constant)");
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + cfg.out + "'");
  f << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// -- regime -----------------------------------------------------------------

inline int cmd_regime(long s, long rp, long sp, const RunConfig& cfg, std::ostream& out) {
  const Regime r = regime(s, rp, sp);
  if (cfg.fmt() == Format::Csv) {
    std::ostringstream os;
    os << "s,rp,sp,regime,lower,upper,gap,hypothesis_violation\n"
       << s << ',' << rp << ',' << sp << ',' << to_string(r.tag) << ',' << r.lower << ',' << r.upper << ',' << r.gap
       << ',' << (r.hypothesis_violation ? "true" : "false") << '\n';
    emit(cfg, os.str(), out);
  } else {
    Json j{{"s", s}, {"rp", rp}, {"sp", sp}, {"regime", to_string(r.tag)}};
    const Json rj = to_json(r);
    for (const auto& [k, v] : rj.items())
      if (k != "tag") j[k] = v;
    emit(cfg, dump(j), out);
  }
  return 0;
}

// -- check ------------------------------------------------------------------

inline Json shape_json(Shape sh) { return Json::array({sh.r, sh.s}); }

inline int cmd_check(const MapSource& src, const RunConfig& cfg, std::ostream& out) {
  std::vector<VerificationReport> reports;
  Shape s_src;
  Shape s_tgt;
  auto run_sampling = [&](const PolyMatrixMap<Complex>& f) {
    s_src = f.src();
    s_tgt = f.tgt();
    reports.push_back(check_null_preservation(f, cfg.samples, cfg.tol, derive_seed(cfg.seed, 1)));
    if (f.src().r == 1) reports.push_back(check_orthogonality_preservation(f, cfg.samples, cfg.tol, derive_seed(cfg.seed, 2)));
  };
  if (cfg.exact()) {
    const auto f = load_map<GaussRational>(src);
    run_sampling(map_cast<Complex>(f));
    reports.push_back(pit_orthogonality(f, cfg.trials, derive_seed(cfg.seed, 3)));
  } else {
    run_sampling(load_map<Complex>(src));
  }
  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed();

  if (cfg.fmt() == Format::Csv) {
    std::ostringstream os;
    os << "check,mode,trials,max_residual,all_zero,failures,passed\n";
    for (const auto& r : reports)
      os << r.check << ',' << to_string(r.mode) << ',' << r.trials << ',' << detail::format_double(r.max_residual)
         << ',' << (r.all_zero ? "true" : "false") << ',' << r.failure_count << ',' << (r.passed() ? "true" : "false")
         << '\n';
    emit(cfg, os.str(), out);
  } else {
    Json checks = Json::array();
    for (const auto& r : reports) checks.push_back(to_json(r));
    Json j{{"command", "check"},
           {"mode", cfg.mode},
           {"seed", cfg.seed},
           {"src", shape_json(s_src)},
           {"tgt", shape_json(s_tgt)},
           {"checks", std::move(checks)},
           {"passed", passed}};
    emit(cfg, dump(j), out);
  }
  return passed ? 0 : 1;
}

// -- analyze ----------------------------------------------------------------

template <Scalar T>
Json analyze_json(const PolyMatrixMap<T>& map, const RunConfig& cfg) {
  require(map.src().r == 1, ErrorCode::InvalidArgument, "analyze: the analyzer needs source rank r = 1");
  AnalyzerConfig ac;
  ac.tol = cfg.exact() ? 0.0 : cfg.tol;
  ac.seed = cfg.seed;
  const auto f = as_function(map);
  Json j = to_json(classify_map(f, ac));
  const double tol = ac.tol;
  try {
    j["dimension_bound"] = to_json(dimension_bound_check(f, tol, derive_seed(cfg.seed, 7)));
  } catch (const Error& e) {
    j["dimension_bound"] = Json{{"error", e.what()}};
  }
  j["hyperplane_span"] = to_json(hyperplane_span_test(f, 3, tol, derive_seed(cfg.seed, 8)));
  return j;
}

inline int cmd_analyze(const MapSource& src, const RunConfig& cfg, std::ostream& out) {
  Json report = cfg.exact() ? analyze_json(load_map<GaussRational>(src), cfg) : analyze_json(load_map<Complex>(src), cfg);
  Json j{{"command", "analyze"}, {"mode", cfg.mode}};
  for (auto& [k, v] : report.items()) j[k] = v;
  if (cfg.fmt() == Format::Csv) {
    std::ostringstream os;
    os << "field,value\n";
    os << "regime," << j["regime"]["tag"].get<std::string>() << '\n';
    os << "classification," << j["classification"].get<std::string>() << '\n';
    os << "common_null_dim," << (j["common_null"].is_null() ? 0 : j["common_null"]["basis"].size()) << '\n';
    for (const auto& [k, v] : j["residuals"].items()) os << "residual:" << k << ',' << v.get<std::string>() << '\n';
    emit(cfg, os.str(), out);
  } else {
    emit(cfg, dump(j), out);
  }
  return 0;
}

// -- sample -----------------------------------------------------------------

template <Scalar T>
void csv_matrix(std::ostream& os, size_t sample, const std::string& item, const Matrix<T>& m) {
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      const auto [re, im] = ScalarTraits<T>::format(m(i, j));
      os << sample << ',' << item << ',' << i << ',' << j << ',' << re << ',' << im << '\n';
    }
}

template <Scalar T>
std::string sample_stream(const std::string& kind, size_t r, size_t s, size_t n, const RunConfig& cfg) {
  std::ostringstream os;
  const bool csv = cfg.fmt() == Format::Csv;
  if (csv) os << "sample,item,row,col,re,im\n";
  for (size_t i = 0; i < n; ++i) {
    const uint64_t seed = derive_seed(cfg.seed, i);
    if (kind == "shilov") {
      const auto z = sample_shilov(r, s, seed);
      if (csv) {
        csv_matrix(os, i, "Z", z);
      } else {
        os << chart_to_json(z).dump() << '\n';
      }
    } else if (kind == "pair") {
      const auto z = sample_open_point<T>(1, s, derive_seed(seed, 0));
      const auto w = sample_orthogonal_partner(z, derive_seed(seed, 1));
      if (csv) {
        csv_matrix(os, i, "z", z);
        csv_matrix(os, i, "w", w);
      } else {
        os << Json{{"z", chart_to_json(z)}, {"w", chart_to_json(w)}}.dump() << '\n';
      }
    } else {
      const auto frame = sample_orthogonal_frame<T>(s, seed);
      if (csv) {
        for (size_t k = 0; k < frame.size(); ++k) csv_matrix(os, i, "p" + std::to_string(k), frame[k]);
      } else {
        Json pts = Json::array();
        for (const auto& z : frame) pts.push_back(chart_to_json(z));
        os << Json{{"frame", std::move(pts)}}.dump() << '\n';
      }
    }
  }
  return os.str();
}

inline int cmd_sample(const std::string& kind, size_t r, size_t s, size_t n, const RunConfig& cfg, std::ostream& out) {
  if (kind != "shilov" && kind != "pair" && kind != "frame")
    throw UsageError("sample kind must be shilov, pair or frame");
  if (s < 1) throw UsageError("--s must be >= 1");
  if (kind == "shilov" && (r < 1 || r > s)) throw UsageError("shilov samples need 1 <= r <= s");
  if (kind == "shilov" && cfg.exact()) throw UsageError("shilov samples are float only");
  emit(cfg, cfg.exact() ? sample_stream<GaussRational>(kind, r, s, n, cfg) : sample_stream<Complex>(kind, r, s, n, cfg),
       out);
  return 0;
}

// -- demo -------------------------------------------------------------------

/// Walks the two canonical witnesses through check and analyze.
inline int cmd_demo(const RunConfig& cfg, std::ostream& out) {
  Json cases = Json::array();
  const std::vector<MapSource> maps{{"", "standard", 2, 2, 3}, {"", "whitney", 2, 2, 0}, {"", "constant", 2, 2, 3}};
  for (const auto& m : maps) {
    const auto f = load_map<Complex>(m);
    const auto null_rep = check_null_preservation(f, 200, cfg.tol, derive_seed(cfg.seed, 1));
    const auto orth_rep = check_orthogonality_preservation(f, 200, cfg.tol, derive_seed(cfg.seed, 2));
    const auto pit = pit_orthogonality(load_map<GaussRational>(m), 20, derive_seed(cfg.seed, 3));
    AnalyzerConfig ac;
    ac.seed = cfg.seed;
    ac.tol = cfg.tol;
    const auto rep = classify_map(f, ac);
    cases.push_back(Json{{"map", m.builtin},
                         {"src", shape_json(f.src())},
                         {"tgt", shape_json(f.tgt())},
                         {"regime", to_string(rep.regime.tag)},
                         {"null_preservation", null_rep.passed()},
                         {"orthogonality_preservation", orth_rep.passed()},
                         {"pit_all_zero", pit.all_zero},
                         {"classification", to_string(rep.classification)}});
  }
  if (cfg.fmt() == Format::Csv) {
    std::ostringstream os;
    os << "map,regime,null_preservation,orthogonality_preservation,pit_all_zero,classification\n";
    for (const auto& c : cases)
      os << c["map"].get<std::string>() << ',' << c["regime"].get<std::string>() << ','
         << c["null_preservation"].dump() << ',' << c["orthogonality_preservation"].dump() << ','
         << c["pit_all_zero"].dump() << ',' << c["classification"].get<std::string>() << '\n';
    emit(cfg, os.str(), out);
  } else {
    emit(cfg, dump(Json{{"command", "demo"}, {"seed", cfg.seed}, {"cases", std::move(cases)}}), out);
  }
  return 0;
}

// -- entry point ------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"grassorth: orthogonal maps between indefinite Grassmannians"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::optional<uint64_t> seed_flag;
  app.add_option("--mode", cfg.mode, "Scalar backend")->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--tol", cfg.tol, "Float tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--samples", cfg.samples, "Sample / pair count")->check(CLI::PositiveNumber);
  app.add_option("--trials", cfg.trials, "Exact identity-test trials")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_flag, "Master seed (default: $GRASSORTH_SEED or 0)");
  app.add_option("--out", cfg.out, "Write output to this file");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  long rs = 0;
  long rrp = 0;
  long rsp = 0;
  auto* regime_cmd = app.add_subcommand("regime", "Rigidity regime for (s, r', s')");
  regime_cmd->add_option("--s", rs)->required();
  regime_cmd->add_option("--rp", rrp)->required();
  regime_cmd->add_option("--sp", rsp)->required();

  MapSource map;
  auto add_map_options = [&map](CLI::App* sub) {
    sub->add_option("map_file", map.file, "Map file (JSON)");
    sub->add_option("--builtin", map.builtin, "standard | whitney | constant");
    sub->add_option("--s", map.s, "Source s")->check(CLI::PositiveNumber);
    sub->add_option("--rp", map.rp, "Target r'")->check(CLI::PositiveNumber);
    sub->add_option("--sp", map.sp, "Target s'");
  };
  auto* check_cmd = app.add_subcommand("check", "Null/orthogonality preservation (and exact identity test)");
  add_map_options(check_cmd);
  auto* analyze_cmd = app.add_subcommand("analyze", "Rigidity analysis of a rank-1-source map");
  add_map_options(analyze_cmd);

  std::string kind;
  size_t sr = 1;
  size_t ss = 2;
  size_t sn = 1;
  auto* sample_cmd = app.add_subcommand("sample", "Emit seeded samples as JSON lines");
  sample_cmd->add_option("kind", kind, "shilov | pair | frame")->required();
  sample_cmd->add_option("--r", sr);
  sample_cmd->add_option("--s", ss);
  sample_cmd->add_option("--n", sn)->check(CLI::PositiveNumber);

  auto* demo_cmd = app.add_subcommand("demo", "Run the canonical witnesses end to end");

  std::vector<const char*> argv{"grassorth"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (seed_flag) {
      cfg.seed = *seed_flag;
    } else if (auto s = env_seed()) {
      cfg.seed = *s;
    }
    if (*regime_cmd) return cmd_regime(rs, rrp, rsp, cfg, out);
    if (*check_cmd) return cmd_check(map, cfg, out);
    if (*analyze_cmd) return cmd_analyze(map, cfg, out);
    if (*sample_cmd) return cmd_sample(kind, sr, ss, sn, cfg, out);
    if (*demo_cmd) return cmd_demo(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace grassorth::cli
