#pragma once

// Command-line driver. run() owns argument parsing and all output so that it
// can be exercised in-process by tests; tools/sdet.cpp is a thin main().
//
// Exit codes: 0 success, 1 verification mismatch or runtime failure,
// 2 bad arguments.

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdet/emit.hpp"
#include "sdet/errors.hpp"
#include "sdet/sdetcore.hpp"

namespace sdet::cli {

enum class Command { compute, verify, expand, goldens, bench };
enum class Format { text, json, latex };

struct CliConfig {
  Command command = Command::compute;
  int n = 0;
  std::string path;  // path name or "all"; empty selects the command default
  Format format = Format::text;
  int order = 1;
  std::optional<int> l;
  std::string out;  // empty writes to the output stream
  std::string goldens_dir = SDET_GOLDEN_DIR;
  bool stress = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kMaxDefaultN = 4;

// Caps the address space when SDET_MEMORY_LIMIT_MB is set. Returns false on
// a malformed value.
inline bool apply_memory_limit(std::ostream& err) {
  const char* v = std::getenv("SDET_MEMORY_LIMIT_MB");
  if (v == nullptr || *v == '\0') return true;
  char* end = nullptr;
  const unsigned long long mb = std::strtoull(v, &end, 10);
  if (*end != '\0' || mb == 0) {
    err << "error: SDET_MEMORY_LIMIT_MB must be a positive integer\n";
    return false;
  }
  rlimit lim{};
  lim.rlim_cur = lim.rlim_max = static_cast<rlim_t>(mb) * 1024 * 1024;
  if (setrlimit(RLIMIT_AS, &lim) != 0) err << "warning: could not apply memory limit\n";
  return true;
}

namespace detail {

inline std::vector<Path> selected_paths(const std::string& name) {
  if (name == "all") return {kAllPaths.begin(), kAllPaths.end()};
  return {*parse_path(name)};
}

inline int sign_of_l(int l) { return l % 2 == 0 ? 1 : -1; }

class Emitter {
 public:
  Emitter(const std::string& file, std::ostream& fallback) : os_(&fallback) {
    if (!file.empty()) {
      file_.open(file, std::ios::binary);
      if (!file_) throw Error("cannot open output file " + file);
      os_ = &file_;
    }
  }
  std::ostream& os() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline std::string render(const SdetResult& r, Format f) {
  switch (f) {
    case Format::json: return to_json(r);
    case Format::latex: return to_latex(r.value, r.n) + "\n";
    case Format::text: break;
  }
  return to_text(r.value) + "\n";
}

inline int do_compute(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<Path> paths = selected_paths(c.path.empty() ? "thm" : c.path);
  std::optional<SdetResult> first;
  for (Path p : paths) {
    SdetResult r = compute_sdet(c.n, p);
    if (!first) {
      first = std::move(r);
    } else if (!(r.value == first->value)) {
      err << "error: path " << path_name(p) << " disagrees with " << path_name(first->path) << ": "
          << sdet::detail::first_word_difference(r.value, first->value) << "\n";
      return kExitMismatch;
    }
  }
  Emitter e(c.out, out);
  e.os() << render(*first, c.format);
  return kExitOk;
}

inline int do_verify(const CliConfig& c, std::ostream& out) {
  const std::vector<Path> paths = selected_paths(c.path.empty() ? "all" : c.path);
  std::ostringstream rep;
  bool ok = true;
  AlgElem value;
  if (paths.size() == kAllPaths.size()) {
    const CrossCheckReport cc = cross_check(c.n);
    rep << cc.to_text();
    ok = cc.passed();
    value = cc.values.at(Path::thm);
  } else {
    value = sdet_theorem(c.n);
    const Path p = paths.front();
    try {
      const SdetResult r = compute_sdet(c.n, p);
      const bool same = r.value == value;
      ok = same;
      rep << (same ? "[PASS] " : "[FAIL] ") << "n=" << c.n << " sdet[" << path_name(p) << "] == sdet[thm]";
      if (!same) rep << " (" << sdet::detail::first_word_difference(r.value, value) << ")";
      rep << "\n";
    } catch (const ExtractionError& e) {
      ok = false;
      rep << "[FAIL] n=" << c.n << " alternating extraction [" << path_name(p) << "] (" << e.what() << ")\n";
    }
  }
  if (c.n == 2 || c.n == 3) {
    const auto file = std::filesystem::path(c.goldens_dir) / ("n" + std::to_string(c.n) + ".golden");
    try {
      const GoldenReport g = golden_compare(value, c.n, file);
      ok = ok && g.match;
      rep << (g.match ? "[PASS] " : "[FAIL] ") << "n=" << c.n << " golden " << file.filename().string();
      if (!g.match) rep << " (" << g.detail << ")";
      rep << "\n";
    } catch (const GoldenError& e) {
      ok = false;
      rep << "[FAIL] n=" << c.n << " golden " << file.filename().string() << " (" << e.what() << ")\n";
    }
  }
  std::vector<int> ls;
  if (c.l)
    ls.push_back(*c.l);
  else
    for (int l = 0; l <= c.n; ++l) ls.push_back(l);
  const SeriesElem s0 = series_coeffs(value, c.n, 0);
  for (int l : ls) {
    const Rational lead = leading(value, c.n, l);
    const Rational ser = specialize_series_coeff(s0, c.n, l, 0);
    const bool good = lead == sign_of_l(l) && ser == sign_of_l(l);
    ok = ok && good;
    rep << (good ? "[PASS] " : "[FAIL] ") << "n=" << c.n << " leading coefficient l=" << l << " (limit "
        << lead.get_str() << ", series " << ser.get_str() << ", expected " << sign_of_l(l) << ")\n";
  }
  rep << "verify n=" << c.n << ": " << (ok ? "PASS" : "FAIL") << "\n";
  Emitter e(c.out, out);
  e.os() << rep.str();
  return ok ? kExitOk : kExitMismatch;
}

inline int do_expand(const CliConfig& c, std::ostream& out) {
  const Path p = selected_paths(c.path.empty() ? "thm" : c.path).front();
  const SdetResult r = compute_sdet(c.n, p);
  const SeriesElem s = series_coeffs(r.value, c.n, c.order);
  Emitter e(c.out, out);
  if (c.format == Format::json) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int k = 0; k <= c.order; ++k) {
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& [w, v] : s.coeff(k)) {
        nlohmann::json word = nlohmann::json::array();
        for (const auto& g : w) word.push_back({g.p, g.q, g.r});
        terms.push_back({{"coeff", v.get_str()}, {"word", word}});
      }
      coeffs.push_back(terms);
    }
    e.os() << nlohmann::json{{"n", c.n}, {"order", c.order}, {"coeffs", coeffs}}.dump(2) << "\n";
    return kExitOk;
  }
  for (int k = 0; k <= c.order; ++k) {
    e.os() << "t^" << k << ":";
    if (s.coeff(k).empty()) e.os() << " 0";
    for (const auto& [w, v] : s.coeff(k)) {
      e.os() << "\n  " << v.get_str();
      if (!w.empty()) e.os() << " * " << to_string(w);
    }
    e.os() << "\n";
  }
  return kExitOk;
}

inline int do_goldens(const CliConfig& c, std::ostream& out) {
  const Path p = selected_paths(c.path.empty() ? "thm" : c.path).front();
  const SdetResult r = compute_sdet(c.n, p);
  const std::string body = to_golden(c.n, r.value,
                                     "Candidate generated by path " + std::string(path_name(p)) +
                                         ".\nDiff against the hand-transcribed golden before replacing it.");
  if (c.out.empty()) {
    out << body;
  } else {
    std::filesystem::path dst(c.out);
    if (std::filesystem::is_directory(dst)) dst /= "n" + std::to_string(c.n) + ".golden.candidate";
    Emitter e(dst.string(), out);
    e.os() << body;
  }
  return kExitOk;
}

inline int do_bench(const CliConfig& c, std::ostream& out) {
  const std::vector<Path> paths = selected_paths(c.path.empty() ? "all" : c.path);
  std::ostringstream os;
  os << std::left << std::setw(6) << "path" << std::right << std::setw(12) << "seconds" << std::setw(10) << "terms"
     << "\n";
  for (Path p : paths) {
    const auto t0 = std::chrono::steady_clock::now();
    const SdetResult r = compute_sdet(c.n, p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << std::left << std::setw(6) << path_name(p) << std::right << std::setw(12) << std::fixed
       << std::setprecision(3) << secs << std::setw(10) << r.value.size() << "\n";
  }
  Emitter e(c.out, out);
  e.os() << os.str();
  return kExitOk;
}

}  // namespace detail

inline int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
  if (c.n < 1) {
    err << "error: --n must be at least 1\n";
    return kExitUsage;
  }
  if (c.n > kMaxDefaultN && !c.stress) {
    err << "error: n > " << kMaxDefaultN
        << " needs --stress (operator paths switch to single-column mode; see SDET_MEMORY_LIMIT_MB)\n";
    return kExitUsage;
  }
  if (!c.path.empty() && c.path != "all" && !parse_path(c.path)) {
    err << "error: unknown path '" << c.path << "'\n";
    return kExitUsage;
  }
  if (c.l && (*c.l < 0 || *c.l > c.n)) {
    err << "error: --l must be in 0..n\n";
    return kExitUsage;
  }
  if (c.order < 0) {
    err << "error: --order must be nonnegative\n";
    return kExitUsage;
  }
  if (c.format == Format::latex && c.command != Command::compute) {
    err << "error: --format latex applies to compute only\n";
    return kExitUsage;
  }
  try {
    switch (c.command) {
      case Command::compute: return detail::do_compute(c, out, err);
      case Command::verify: return detail::do_verify(c, out);
      case Command::expand: return detail::do_expand(c, out);
      case Command::goldens: return detail::do_goldens(c, out);
      case Command::bench: return detail::do_bench(c, out);
    }
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitMismatch;
  } catch (const sdet::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitUsage;
}

// Parses argv and runs. Argument errors print usage and return 2.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sklyanin determinant of the reflection algebra: exact computation and verification", "sdet"};
  app.require_subcommand(1);
  CliConfig c;
  std::string format = "text";
  const std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}, {"latex", Format::latex}};

  struct Sub {
    Command cmd;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::compute, "compute", "Compute sdet via one path (default thm) or all paths"},
      {Command::verify, "verify", "Cross-check every path, compare goldens, check leading coefficients"},
      {Command::expand, "expand", "Expand sdet in powers of 1/u up to --order"},
      {Command::goldens, "goldens", "Write a golden-file candidate for human diff"},
      {Command::bench, "bench", "Time each path at the given n"},
  };
  std::vector<std::pair<CLI::App*, Command>> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--n", c.n, "Matrix size (1-based indices throughout)")->required();
    sub->add_option("--path", c.path, "def|pi|bp|qa|qb|qc|thm|all");
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
    sub->add_flag("--stress", c.stress, "Allow n > 4 (n = 5 takes ~10 s; n = 6 operator paths exceed 5 GB)");
    if (s.cmd == Command::compute || s.cmd == Command::expand)
      sub->add_option("--format", format, "text|json|latex")->check(CLI::IsMember({"text", "json", "latex"}));
    if (s.cmd == Command::expand) sub->add_option("--order", c.order, "Series truncation order");
    if (s.cmd == Command::verify) {
      sub->add_option("--l", c.l, "Check only this eps split (default: all 0..n)");
      sub->add_option("--goldens-dir", c.goldens_dir, "Directory holding n2.golden and n3.golden");
    }
    apps.emplace_back(sub, s.cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  for (const auto& [sub, cmd] : apps)
    if (sub->parsed()) c.command = cmd;
  c.format = formats.at(format);
  if (!apply_memory_limit(err)) return kExitUsage;
  return run(c, out, err);
}

}  // namespace sdet::cli
