#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "spinrec/io.hpp"
#include "spinrec/rotor_recovery.hpp"
#include "spinrec/selftest.hpp"

namespace spinrec::cli {

namespace {

struct Config {
  std::string signature;
  std::string input;
  std::string output;
  double tol_ortho = kDefaultOrthoTolerance;
  double tol_residual = 1e-8;
  double tol_degenerate = 1e-8;
  std::optional<double> tol_check;
  std::string method = "general";
  std::uint64_t seed = 2018;
};

std::optional<Signature> parse_signature_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorKind::ParseError, "--signature expects 'p,q', got '" + text + "'");
  }
  try {
    std::size_t used_p = 0;
    std::size_t used_q = 0;
    const std::string ps = text.substr(0, comma);
    const std::string qs = text.substr(comma + 1);
    const int p = std::stoi(ps, &used_p);
    const int q = std::stoi(qs, &used_q);
    if (used_p != ps.size() || used_q != qs.size()) throw std::invalid_argument("trailing");
    return Signature(p, q);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, "--signature expects 'p,q', got '" + text + "'");
  }
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open input file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << text << '\n';
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw Error(ErrorKind::ParseError, "cannot open output file '" + cfg.output + "'");
  file << text << '\n';
}

bool looks_like_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && (text[first] == '{' || text[first] == '[');
}

RecoveryTolerances tolerances(const Config& cfg) {
  RecoveryTolerances tol;
  tol.ortho = cfg.tol_ortho;
  tol.residual = cfg.tol_residual;
  tol.degenerate = cfg.tol_degenerate;
  return tol;
}

io::MatrixDocument read_matrix(const std::string& text, std::optional<Signature> sig) {
  if (looks_like_json(text)) return io::matrix_from_json(io::parse_json(text), sig);
  if (!sig) throw Error(ErrorKind::ParseError, "CSV input needs --signature p,q");
  return io::matrix_from_csv(text, *sig);
}

int cmd_recover(const Config& cfg, std::ostream& out) {
  const auto doc = read_matrix(read_input(cfg.input), parse_signature_flag(cfg.signature));
  const OrthoMatrix p = validate_pseudo_orthogonal(doc.entries, doc.sig, cfg.tol_ortho);
  const RotorResult r = cfg.method == "hestenes" ? recover_hestenes(p, tolerances(cfg))
                                                 : recover_spin(p, tolerances(cfg));
  emit(cfg, out, io::dump(io::rotor_result_to_json(r)));
  return kOk;
}

int cmd_frames(const Config& cfg, std::ostream& out) {
  const io::Json doc = io::parse_json(read_input(cfg.input));
  const auto frames = io::frames_from_json(doc, parse_signature_flag(cfg.signature));
  const RotorResult r = rotor_from_frames(frames, tolerances(cfg));
  emit(cfg, out, io::dump(io::rotor_result_to_json(r)));
  return kOk;
}

int cmd_forward(const Config& cfg, std::ostream& out) {
  const io::Json doc = io::parse_json(read_input(cfg.input));
  const Multivector s = io::rotor_from_json(doc, parse_signature_flag(cfg.signature));
  const OrthoMatrix p = forward_matrix(s, cfg.tol_ortho);
  io::Json result = io::matrix_to_json(p);
  result["component"] = io::component_to_json(classify_component(p, cfg.tol_ortho));
  result["spin_groups"] = io::spin_tags_to_json(classify_spin(s));
  emit(cfg, out, io::dump(result));
  return kOk;
}

int cmd_classify(const Config& cfg, std::ostream& out) {
  const std::string text = read_input(cfg.input);
  const auto sig = parse_signature_flag(cfg.signature);
  io::Json result;
  const bool is_matrix = !looks_like_json(text) || io::parse_json(text).contains("entries");
  if (is_matrix) {
    const auto doc = read_matrix(text, sig);
    const OrthoMatrix p = validate_pseudo_orthogonal(doc.entries, doc.sig, cfg.tol_ortho);
    result["p"] = doc.sig.p();
    result["q"] = doc.sig.q();
    result["component"] = io::component_to_json(classify_component(p, cfg.tol_ortho));
    result["alpha"] = alpha_sign(p);
  } else {
    const Multivector s = io::rotor_from_json(io::parse_json(text), sig);
    const SpinGroupTags tags = classify_spin(s);
    result["p"] = s.signature().p();
    result["q"] = s.signature().q();
    result["parity"] = odd_part(s).is_zero() ? "even" : "odd";
    result["reverse_norm"] = (reverse(s) * s).scalar_part();
    result["conjugate_norm"] = (conjugate(s) * s).scalar_part();
    result["spin_groups"] = io::spin_tags_to_json(tags);
  }
  emit(cfg, out, io::dump(result));
  return kOk;
}

int cmd_selftest(const Config& cfg, std::ostream& out) {
  SelftestOptions options;
  options.seed = cfg.seed;
  options.tolerance = cfg.tol_check;
  const auto suites = run_selftest(options);
  std::ostringstream table;
  bool all = true;
  table << std::left << std::setw(24) << "suite" << std::setw(8) << "checks" << std::setw(10)
        << "failures" << std::setw(14) << "worst" << std::setw(12) << "tolerance" << "status\n";
  for (const SuiteResult& s : suites) {
    all = all && s.passed();
    table << std::left << std::setw(24) << s.name << std::setw(8) << s.checks << std::setw(10)
          << s.failures << std::setw(14) << std::setprecision(3) << std::scientific << s.worst
          << std::setw(12) << s.tolerance << std::defaultfloat << (s.passed() ? "PASS" : "FAIL")
          << '\n';
  }
  table << (all ? "selftest: PASS" : "selftest: FAIL");
  emit(cfg, out, table.str());
  return all ? kOk : kSelftestFailed;
}

void report(std::ostream& err, ErrorKind kind, const std::string& message, int code,
            double value = std::nan("")) {
  io::Json doc;
  doc["error"] = std::string(to_string(kind));
  doc["message"] = message;
  doc["exit_code"] = code;
  if (std::isfinite(value)) doc["value"] = value;
  err << io::dump(doc, -1) << '\n';
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::SignatureMismatch:
      return kParseError;
    case ErrorKind::NotPseudoOrthogonal:
    case ErrorKind::NotAFrame:
      return kNotPseudoOrthogonal;
    case ErrorKind::CenterProjectionVanishes:
    case ErrorKind::HestenesConditionFailed:
      return kCenterVanishes;
    case ErrorKind::VerificationFailed:
    case ErrorKind::NoRealRoot:
    case ErrorKind::Inconsistent:
    case ErrorKind::NotAVersor:
      return kVerificationFailed;
    case ErrorKind::EvenCaseNeedsSO:
    case ErrorKind::WrongComponent:
    case ErrorKind::WrongSignature:
    case ErrorKind::NotInPin:
    case ErrorKind::NotInLipschitzGroup:
    case ErrorKind::MixedParity:
      return kWrongComponent;
  }
  return kParseError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Spin group elements for pseudo-orthogonal matrices", "spinrec"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--signature", cfg.signature, "Metric signature as p,q");
  app.add_option("--input", cfg.input, "Input file (default: stdin)");
  app.add_option("--output", cfg.output, "Output file (default: stdout)");
  app.add_option("--tol-ortho", cfg.tol_ortho, "Tolerance for P^T eta P = eta")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-residual", cfg.tol_residual, "Acceptance of the verification residual")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-degenerate", cfg.tol_degenerate, "M counts as zero below 2^n times this")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-check", cfg.tol_check, "Override every selftest threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--method", cfg.method, "Recovery method")
      ->check(CLI::IsMember({"general", "hestenes"}));
  app.add_option("--seed", cfg.seed, "Seed for the selftest generators");

  auto* recover = app.add_subcommand("recover", "Matrix to spin group element");
  auto* frames = app.add_subcommand("frames", "Rotor taking the basis to a given frame");
  auto* forward = app.add_subcommand("forward", "Spin group element to matrix");
  auto* classify = app.add_subcommand("classify", "Group membership of a matrix or versor");
  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    report(err, ErrorKind::ParseError, e.what(), kParseError);
    return kParseError;
  }

  try {
    if (*recover) return cmd_recover(cfg, out);
    if (*frames) return cmd_frames(cfg, out);
    if (*forward) return cmd_forward(cfg, out);
    if (*classify) return cmd_classify(cfg, out);
    if (*selftest) return cmd_selftest(cfg, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report(err, e.kind(), e.what(), code, e.value());
    return code;
  }
  return kParseError;
}

}  // namespace spinrec::cli
