#include "homapprox/report.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "homapprox/error.hpp"
#include "homapprox/parser.hpp"

namespace homapprox {

Mode parse_mode(std::string_view text) {
  if (text == "both") return Mode::kBoth;
  if (text == "nonautonomous") return Mode::kNonautonomous;
  if (text == "autonomous") return Mode::kAutonomous;
  throw InputError("unknown mode '" + std::string(text) + "' (expected both, nonautonomous or autonomous)");
}

Format parse_format(std::string_view text) {
  if (text == "text") return Format::kText;
  if (text == "latex") return Format::kLatex;
  if (text == "json") return Format::kJson;
  throw InputError("unknown format '" + std::string(text) + "' (expected text, latex or json)");
}

// --- system files ---------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

ControlSystem parse_system(std::string_view text) {
  std::optional<int> n;
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> fields;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected 'name = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key == "n") {
      if (n) throw InputError("line " + std::to_string(line_no) + ": n given twice");
      if (!all_digits(value) || value.size() > 3) {
        throw InputError("line " + std::to_string(line_no) + ": n must be a positive integer");
      }
      n = std::stoi(value);
      if (*n < 1 || *n > kMaxDimension) {
        throw InputError("line " + std::to_string(line_no) + ": n must lie between 1 and " +
                         std::to_string(kMaxDimension));
      }
      continue;
    }
    if (key.size() < 2 || (key[0] != 'a' && key[0] != 'b') || !all_digits(key.substr(1)) || key[1] == '0') {
      throw InputError("line " + std::to_string(line_no) + ": unknown name '" + key + "'");
    }
    if (fields.count(key)) throw InputError("line " + std::to_string(line_no) + ": " + key + " given twice");
    fields.emplace(key, Entry{value, line_no});
  }
  if (!n) throw InputError("missing 'n = ...' line");

  ControlSystem sys;
  sys.n = *n;
  for (char kind : {'a', 'b'}) {
    for (int i = 1; i <= *n; ++i) {
      std::string key = kind + std::to_string(i);
      auto it = fields.find(key);
      if (it == fields.end()) throw InputError("missing '" + key + " = ...' line");
      Expr e;
      try {
        e = parse_expr(it->second.value, *n);
      } catch (const ParseError& error) {
        throw ParseError("line " + std::to_string(it->second.line) + " (" + key + "): " +
                             std::string(error.what()).substr(0, std::string(error.what()).rfind(" at position")),
                         error.position());
      }
      (kind == 'a' ? sys.a : sys.b).push_back(e);
      fields.erase(it);
    }
  }
  if (!fields.empty()) {
    const auto& [key, entry] = *fields.begin();
    throw InputError("line " + std::to_string(entry.line) + ": " + key + " exceeds the dimension n = " +
                     std::to_string(*n));
  }
  return sys;
}

ControlSystem read_system_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_system(buffer.str());
}

std::string format_system(const ControlSystem& sys) {
  std::string out = "n = " + std::to_string(sys.n) + "\n";
  for (int i = 0; i < sys.n; ++i) out += "a" + std::to_string(i + 1) + " = " + to_string(simplify(sys.a[i])) + "\n";
  for (int i = 0; i < sys.n; ++i) out += "b" + std::to_string(i + 1) + " = " + to_string(simplify(sys.b[i])) + "\n";
  return out;
}

std::string format_system(const PolynomialSystem& sys) {
  std::string out = "n = " + std::to_string(sys.n) + "\n";
  for (int i = 0; i < sys.n; ++i) out += "a" + std::to_string(i + 1) + " = " + sys.a_hat[i].to_string() + "\n";
  for (int i = 0; i < sys.n; ++i) out += "b" + std::to_string(i + 1) + " = " + sys.b_hat[i].to_string() + "\n";
  return out;
}

// --- shared pieces of the reports -----------------------------------------

namespace {

struct ShuffleLine {
  std::string name;  // "y_1", "phi", "psi"
  int order;
  AlgElem element;
  ShufflePolynomial poly;
};

// Decompositions used by the reconstruction of component i (0-based).
std::vector<ShuffleLine> nonautonomous_lines(const Projection& proj, std::size_t i) {
  std::vector<std::pair<AlgElem, int>> basis;
  for (std::size_t k = 0; k < i; ++k) basis.emplace_back(proj.ell_tilde[k], proj.orders[k]);
  std::vector<ShuffleLine> out;
  for (const auto& [j, y] : split_by_last_letter(proj.ell_tilde[i]).prefixes) {
    const int m = proj.orders[i] - j - 1;
    out.push_back({"y_" + std::to_string(j), m, y, express_as_shuffle_poly(y, basis, m)});
  }
  return out;
}

std::vector<ShuffleLine> autonomous_lines(const Projection& proj, std::size_t i) {
  std::vector<std::pair<AlgElem, int>> basis;
  for (std::size_t k = 0; k < i; ++k) basis.emplace_back(proj.ell_tilde[k], proj.orders[k]);
  const int m = proj.orders[i] - 1;
  AlgElem d = phi(proj.ell_tilde[i]);
  AlgElem p = psi(proj.ell_tilde[i]);
  return {{"phi", m, d, express_as_shuffle_poly(d, basis, m)}, {"psi", m, p, express_as_shuffle_poly(p, basis, m)}};
}

std::string monomial_text(const std::vector<int>& q) {
  std::string out;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!q[k]) continue;
    if (!out.empty()) out += " * ";
    out += "L" + std::to_string(k + 1);
    if (q[k] > 1) out += "^" + std::to_string(q[k]);
  }
  return out.empty() ? "1" : out;
}

std::string monomial_latex(const std::vector<int>& q) {
  std::string out;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!q[k]) continue;
    if (!out.empty()) out += " \\shuffle ";
    out += "\\tilde\\ell_{" + std::to_string(k + 1) + "}";
    if (q[k] > 1) out += "^{\\shuffle " + std::to_string(q[k]) + "}";
  }
  return out.empty() ? "1" : out;
}

template <class Mono, class Coef>
std::string signed_sum(const ShufflePolynomial& p, Mono mono, Coef coef, const std::string& times) {
  if (p.terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [q, c] : p.terms) {
    Rational mag = abs(c);
    out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    first = false;
    std::string m = mono(q);
    if (m == "1") {
      out += coef(mag);
    } else if (mag == 1) {
      out += m;
    } else {
      out += coef(mag) + times + m;
    }
  }
  return out;
}

std::string shuffle_text(const ShufflePolynomial& p) {
  return signed_sum(p, monomial_text, [](const Rational& r) { return to_string(r); }, "*");
}

std::string shuffle_latex(const ShufflePolynomial& p) {
  return signed_sum(p, monomial_latex, [](const Rational& r) { return to_latex(r); }, " ");
}

std::string vector_latex(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_latex(v[i]);
  return out + ")";
}

std::string expr_latex(const Expr& e) {
  // The input grammar is close enough to LaTeX math for a verbatim display.
  return "\\texttt{" + to_string(e) + "}";
}

const char* kNormalizationNote =
    "The approximating system is determined up to an order-preserving polynomial change of coordinates; "
    "it is given in the normalization b_i = -alpha_i t^(w_i - 1) - ..., so it can differ from the input "
    "even when the input is already homogeneous.";

std::string slope_note(const VerificationReport& v) {
  std::ostringstream s;
  s << "Residual slopes must reach N + " << kSlopeMargin << " = " << v.slope_threshold
    << " (N + 1 in the limit; the margin absorbs finite-horizon effects).";
  return s.str();
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "n/a";
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

}  // namespace

// --- text -----------------------------------------------------------------

std::string render_text(const ControlSystem& sys, const ApproximationResult& r, Mode mode,
                        const VerificationReport* verification) {
  std::ostringstream out;
  out << "== System ==\n" << format_system(sys) << "\n";

  out << "== Series up to order " << r.max_order << " (nonzero coefficients) ==\n";
  for (const auto& [w, v] : r.series.coeffs) {
    if (!is_zero(v)) out << "v(" << w.to_string() << ") = " << to_string(v) << "\n";
  }

  out << "\n== Lie basis up to order " << r.projection.orders.back() << " ==\n";
  for (const auto& g : r.basis) {
    out << "g_" << g.index + 1 << " = " << g.bracket_string() << "  order " << g.order << ", v = "
        << to_string(lie_coefficient(r.series, g)) << "\n";
  }

  out << "\n== Core split ==\n";
  for (std::size_t i = 0; i < r.core.ell.size(); ++i) {
    const auto& l = r.core.ell[i];
    out << "ell_" << i + 1 << " = " << l.label() << "  (w_" << i + 1 << " = " << l.order << ")\n";
  }
  for (std::size_t j = 0; j < r.core.dees.size(); ++j) {
    const auto& d = r.core.dees[j];
    out << "d_" << j + 1 << " = " << d.label() << " = " << d.element.to_string() << "\n";
  }

  out << "\n== Right ideal ==\n";
  for (const auto& [m, block] : r.blocks) {
    out << "order " << m << ": rank " << block.rank() << "\n";
    for (const auto& row : block.rows) out << "  " << row.to_string() << "\n";
  }

  out << "\n== Projections ==\n";
  for (std::size_t i = 0; i < r.projection.ell_tilde.size(); ++i) {
    out << "ell~_" << i + 1 << " = " << r.projection.ell_tilde[i].to_string() << "  (order " << r.projection.orders[i]
        << ")\n";
  }

  const std::string legend = "(Lk stands for ell~_k; products and powers are shuffles)\n";
  if (mode != Mode::kAutonomous) {
    out << "\n== Non-autonomous approximating system ==\n" << legend;
    for (std::size_t i = 1; i < r.projection.ell_tilde.size(); ++i) {
      for (const auto& line : nonautonomous_lines(r.projection, i)) {
        out << "component " << i + 1 << ": " << line.name << " = " << line.element.to_string() << " = "
            << shuffle_text(line.poly) << "\n";
      }
    }
    out << format_system(r.nonautonomous);
  }
  if (mode != Mode::kNonautonomous) {
    out << "\n== Autonomous approximating system ==\n";
    if (const auto* a = std::get_if<PolynomialSystem>(&r.autonomous)) {
      out << legend;
      for (std::size_t i = 1; i < r.projection.ell_tilde.size(); ++i) {
        for (const auto& line : autonomous_lines(r.projection, i)) {
          out << "component " << i + 1 << ": " << line.name << "(ell~_" << i + 1 << ") = " << line.element.to_string()
              << " = " << shuffle_text(line.poly) << "\n";
        }
      }
      out << format_system(*a);
    } else {
      const auto& none = std::get<NoAutonomousApproximation>(r.autonomous);
      out << "no autonomous approximating system exists\n";
      if (none.component == "ell_tilde") {
        out << "witness: ell~_1 = " << none.witness.to_string() << " is not a multiple of xi_{0}\n";
      } else {
        out << "witness: " << none.component << "(ell~_" << none.index << ") = " << none.witness.to_string()
            << " is not a shuffle polynomial of ell~_1..ell~_" << none.index - 1 << "\n";
      }
    }
  }
  out << "\nNote: " << kNormalizationNote << "\n";

  if (verification) {
    const auto& v = *verification;
    out << "\n== Verification ==\n" << slope_note(v) << "\n";
    for (std::size_t k = 0; k < v.original.size(); ++k) {
      out << "control " << k + 1 << ": slope " << fmt_double(v.original[k].check.slope) << " "
          << (v.original[k].pass ? "pass" : "FAIL") << "\n";
    }
    out << "non-autonomous: self residual " << fmt_double(v.nonautonomous_residual) << ", series "
        << (v.nonautonomous_consistency.empty() ? "consistent" : "INCONSISTENT: " + v.nonautonomous_consistency)
        << "\n";
    if (v.autonomous_residual) {
      out << "autonomous: self residual " << fmt_double(*v.autonomous_residual) << ", series "
          << (v.autonomous_consistency->empty() ? "consistent" : "INCONSISTENT: " + *v.autonomous_consistency)
          << "\n";
    }
    out << "verification " << (v.pass ? "passed" : "FAILED") << "\n";
  }
  return out.str();
}

// --- LaTeX ----------------------------------------------------------------

namespace {

std::string system_latex(const PolynomialSystem& sys) {
  std::string out = "\\begin{aligned}\n";
  for (int i = 0; i < sys.n; ++i) {
    const std::string idx = std::to_string(i + 1);
    out += "\\dot x_{" + idx + "} &= ";
    bool has_a = !sys.a_hat[i].is_zero();
    bool has_b = !sys.b_hat[i].is_zero();
    if (has_a) out += sys.a_hat[i].to_latex();
    if (has_b) out += std::string(has_a ? " + " : "") + "\\left(" + sys.b_hat[i].to_latex() + "\\right) u";
    if (!has_a && !has_b) out += "0";
    out += i + 1 < sys.n ? " \\\\\n" : "\n";
  }
  return out + "\\end{aligned}";
}

}  // namespace

std::string render_latex(const ControlSystem& sys, const ApproximationResult& r, Mode mode,
                         const VerificationReport* verification) {
  std::ostringstream out;
  out << "\\documentclass{article}\n\\usepackage{amsmath}\n"
      << "\\newcommand{\\shuffle}{\\mathbin{\\sqcup\\mkern-3mu\\sqcup}}\n\\begin{document}\n\n";

  out << "\\section*{System}\n\\begin{align*}\n";
  for (int i = 0; i < sys.n; ++i) {
    out << "a_{" << i + 1 << "} &= " << expr_latex(sys.a[i]) << ", & b_{" << i + 1 << "} &= " << expr_latex(sys.b[i])
        << (i + 1 < sys.n ? " \\\\\n" : "\n");
  }
  out << "\\end{align*}\n\n";

  out << "\\section*{Series up to order " << r.max_order << "}\n\\begin{align*}\n";
  bool first = true;
  for (const auto& [w, v] : r.series.coeffs) {
    if (is_zero(v)) continue;
    out << (first ? "" : " \\\\\n") << "v(" << w.to_latex() << ") &= " << vector_latex(v);
    first = false;
  }
  out << "\n\\end{align*}\n\n";

  out << "\\section*{Core split}\n\\begin{align*}\n";
  for (std::size_t i = 0; i < r.core.ell.size(); ++i) {
    const auto& l = r.core.ell[i];
    out << "\\ell_{" << i + 1 << "} &= " << r.basis[l.source].bracket_latex() << ", & w_{" << i + 1
        << "} &= " << l.order << " \\\\\n";
  }
  for (std::size_t j = 0; j < r.core.dees.size(); ++j) {
    out << "d_{" << j + 1 << "} &= " << r.core.dees[j].element.to_latex()
        << (j + 1 < r.core.dees.size() ? " \\\\\n" : "\n");
  }
  out << "\\end{align*}\n\n";

  out << "\\section*{Right ideal}\n";
  for (const auto& [m, block] : r.blocks) {
    out << "Order " << m << ", rank " << block.rank() << ".";
    if (!block.rows.empty()) {
      out << "\n\\begin{align*}\n";
      for (std::size_t k = 0; k < block.rows.size(); ++k) {
        out << "& " << block.rows[k].to_latex() << (k + 1 < block.rows.size() ? " \\\\\n" : "\n");
      }
      out << "\\end{align*}";
    }
    out << "\n\n";
  }

  out << "\\section*{Projections}\n\\begin{align*}\n";
  for (std::size_t i = 0; i < r.projection.ell_tilde.size(); ++i) {
    out << "\\tilde\\ell_{" << i + 1 << "} &= " << r.projection.ell_tilde[i].to_latex()
        << (i + 1 < r.projection.ell_tilde.size() ? " \\\\\n" : "\n");
  }
  out << "\\end{align*}\n\n";

  if (mode != Mode::kAutonomous) {
    out << "\\section*{Non-autonomous approximating system}\n\\begin{align*}\n";
    for (std::size_t i = 1; i < r.projection.ell_tilde.size(); ++i) {
      for (const auto& line : nonautonomous_lines(r.projection, i)) {
        out << line.element.to_latex() << " &= " << shuffle_latex(line.poly) << " \\\\\n";
      }
    }
    out << "& " << system_latex(r.nonautonomous) << "\n\\end{align*}\n\n";
  }
  if (mode != Mode::kNonautonomous) {
    out << "\\section*{Autonomous approximating system}\n";
    if (const auto* a = std::get_if<PolynomialSystem>(&r.autonomous)) {
      out << "\\begin{align*}\n";
      for (std::size_t i = 1; i < r.projection.ell_tilde.size(); ++i) {
        for (const auto& line : autonomous_lines(r.projection, i)) {
          out << "\\" << line.name << "(\\tilde\\ell_{" << i + 1 << "}) &= " << line.element.to_latex() << " = "
              << shuffle_latex(line.poly) << " \\\\\n";
        }
      }
      out << "& " << system_latex(*a) << "\n\\end{align*}\n\n";
    } else {
      const auto& none = std::get<NoAutonomousApproximation>(r.autonomous);
      out << "No autonomous approximating system exists: ";
      if (none.component == "ell_tilde") {
        out << "$\\tilde\\ell_{1} = " << none.witness.to_latex() << "$ is not a multiple of $\\xi_{0}$.\n\n";
      } else {
        out << "$\\" << none.component << "(\\tilde\\ell_{" << none.index << "}) = " << none.witness.to_latex()
            << "$ is not a shuffle polynomial of $\\tilde\\ell_{1}, \\dots, \\tilde\\ell_{" << none.index - 1
            << "}$.\n\n";
      }
    }
  }
  out << kNormalizationNote << "\n\n";

  if (verification) {
    const auto& v = *verification;
    out << "\\section*{Verification}\n" << slope_note(v) << "\n\n\\begin{tabular}{rrl}\ncontrol & slope & \\\\\n";
    for (std::size_t k = 0; k < v.original.size(); ++k) {
      out << k + 1 << " & " << fmt_double(v.original[k].check.slope) << " & "
          << (v.original[k].pass ? "pass" : "FAIL") << " \\\\\n";
    }
    out << "\\end{tabular}\n\nNon-autonomous self residual " << fmt_double(v.nonautonomous_residual) << ".\n";
    if (v.autonomous_residual) out << "Autonomous self residual " << fmt_double(*v.autonomous_residual) << ".\n";
    out << "Verification " << (v.pass ? "passed" : "failed") << ".\n\n";
  }
  out << "\\end{document}\n";
  return out.str();
}

// --- JSON -----------------------------------------------------------------

nlohmann::ordered_json render_json(const ControlSystem& sys, const ApproximationResult& r, Mode mode,
                                   const VerificationReport* verification) {
  nlohmann::ordered_json input;
  input["n"] = sys.n;
  nlohmann::ordered_json a = nlohmann::ordered_json::array(), b = nlohmann::ordered_json::array();
  for (const auto& e : sys.a) a.push_back(to_string(simplify(e)));
  for (const auto& e : sys.b) b.push_back(to_string(simplify(e)));
  input["a"] = a;
  input["b"] = b;

  nlohmann::ordered_json result = r.to_json();
  if (mode == Mode::kAutonomous) result.erase("nonautonomous");
  if (mode == Mode::kNonautonomous) result.erase("autonomous");

  nlohmann::ordered_json out;
  out["input"] = input;
  out["mode"] = mode == Mode::kBoth ? "both" : mode == Mode::kAutonomous ? "autonomous" : "nonautonomous";
  out["result"] = result;
  out["note"] = kNormalizationNote;
  if (verification) out["verification"] = verification->to_json();
  return out;
}

// --- driver ---------------------------------------------------------------

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto log = [&](const std::string& msg) {
    if (cfg.verbosity > 0) {
      double s = std::chrono::duration<double>(Clock::now() - start).count();
      err << "[" << fmt_double(s) << " s] " << msg << "\n";
    }
  };

  ControlSystem sys;
  ApproximationResult result;
  try {
    sys = read_system_file(cfg.input);
    PipelineOptions options;
    options.max_order = cfg.max_order;
    log("read system of dimension " + std::to_string(sys.n));
    result = approximate(sys, options);
    log("pipeline finished at order " + std::to_string(result.max_order));
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInputError;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInputError;
  } catch (const NotAccessibleError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kNotAccessible;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::kInternal;
  }

  int status = exit_code::kSuccess;
  try {
    std::optional<VerificationReport> verification;
    if (cfg.verify) {
      verification = verify_result(sys, result);
      log("verification finished");
      if (!verification->pass) {
        err << "error: verification failed\n";
        status = exit_code::kInternal;
      }
    }
    const VerificationReport* v = verification ? &*verification : nullptr;

    std::string report;
    std::string extension;
    switch (cfg.format) {
      case Format::kText:
        report = render_text(sys, result, cfg.mode, v);
        extension = "txt";
        break;
      case Format::kLatex:
        report = render_latex(sys, result, cfg.mode, v);
        extension = "tex";
        break;
      case Format::kJson:
        report = render_json(sys, result, cfg.mode, v).dump(2) + "\n";
        extension = "json";
        break;
    }

    if (cfg.out_dir) {
      std::filesystem::create_directories(*cfg.out_dir);
      auto path = *cfg.out_dir / ("report." + extension);
      std::ofstream file(path);
      if (!file) throw InputError("cannot write " + path.string());
      file << report;
      log("wrote " + path.string());
    } else {
      out << report;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code::kInternal;
  }

  if (status == exit_code::kSuccess && cfg.mode == Mode::kAutonomous &&
      std::holds_alternative<NoAutonomousApproximation>(result.autonomous)) {
    err << "no autonomous approximating system exists\n";
    status = exit_code::kNoAutonomous;
  }
  return status;
}

}  // namespace homapprox
