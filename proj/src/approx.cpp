#include "homapprox/approx.hpp"

#include <algorithm>

#include "homapprox/error.hpp"

namespace homapprox {

// --- small helpers --------------------------------------------------------

namespace {

nlohmann::ordered_json elem_json(const AlgElem& e) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [w, c] : e.terms()) out.push_back({{"word", w.letters()}, {"coeff", to_string(c)}});
  return out;
}

nlohmann::ordered_json vector_json(const RationalVector& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

nlohmann::ordered_json polynomial_json(const Polynomial& p) {
  return {{"text", p.to_string()}, {"terms", p.to_json()}};
}

}  // namespace

std::string CoreElement::label() const {
  std::string out = "g_" + std::to_string(source + 1);
  for (const auto& [k, c] : correction) {
    Rational mag = abs(c);
    out += c < 0 ? " - " : " + ";
    if (mag != 1) out += to_string(mag) + "*";
    out += "g_" + std::to_string(k + 1);
  }
  return out;
}

std::vector<int> CoreDecomposition::orders() const {
  std::vector<int> out;
  for (const auto& l : ell) out.push_back(l.order);
  return out;
}

RationalMatrix IdealBlock::matrix() const {
  const std::size_t cols = graded_dimension(order);
  RationalMatrix out;
  for (const auto& v : vectors) {
    RationalVector row(cols, Rational(0));
    for (const auto& [j, c] : v) row[j] = c;
    out.push_back(std::move(row));
  }
  return out;
}

ControlSystem PolynomialSystem::to_control_system() const {
  ControlSystem sys;
  sys.n = n;
  for (const auto& p : a_hat) sys.a.push_back(p.to_expr());
  for (const auto& p : b_hat) sys.b.push_back(p.to_expr());
  return sys;
}

nlohmann::ordered_json PolynomialSystem::to_json() const {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  nlohmann::ordered_json b = nlohmann::ordered_json::array();
  for (const auto& p : a_hat) a.push_back(polynomial_json(p));
  for (const auto& p : b_hat) b.push_back(polynomial_json(p));
  return {{"a_hat", a}, {"b_hat", b}};
}

// --- core selection -------------------------------------------------------

CoreDecomposition select_core(const SeriesTable& table, const std::vector<LieBasisElement>& basis, int n) {
  if (n < 1) throw InputError("select_core: dimension must be at least 1");
  CoreDecomposition core;
  RowEchelon span(/*track_combinations=*/true);
  int last_order = 0;

  for (const auto& g : basis) {
    if (g.order > table.max_order) break;
    if (last_order && g.order > last_order) break;

    RationalVector v = lie_coefficient(table, g);
    if (static_cast<int>(core.ell.size()) < n && span.insert(v)) {
      core.ell.push_back({g.index, {}, g.expansion, g.order, v});
      if (static_cast<int>(core.ell.size()) == n) last_order = g.order;
      continue;
    }

    auto coords = span.coordinates(v);
    if (!coords) throw InternalError("select_core: dependent image outside the span of the selected elements");
    CoreElement d{g.index, {}, g.expansion, g.order, v};
    for (std::size_t j = 0; j < core.ell.size(); ++j) {
      const Rational& a = (*coords)[j];
      if (a == 0 || core.ell[j].order != g.order) continue;
      Rational c = -a;
      d.correction.emplace_back(core.ell[j].source, c);
      d.element += c * core.ell[j].element;
      for (int i = 0; i < n; ++i) d.v[i] += c * core.ell[j].v[i];
    }
    core.dees.push_back(std::move(d));
  }

  if (static_cast<int>(core.ell.size()) < n) {
    throw NotAccessibleError("Lie elements up to order " + std::to_string(table.max_order) + " span only " +
                             std::to_string(core.ell.size()) + " of " + std::to_string(n) +
                             " directions; a larger maximal order is needed");
  }
  return core;
}

// --- right ideal ----------------------------------------------------------

std::map<int, IdealBlock> build_ideal_blocks(const CoreDecomposition& core) {
  std::map<int, IdealBlock> blocks;
  for (int m : core.orders()) {
    if (blocks.count(m)) continue;
    IdealBlock block;
    block.order = m;
    RowEchelon echelon;
    auto offer = [&](AlgElem row) {
      SparseVector v = vectorize_sparse(row, m);
      if (echelon.insert(v)) {
        block.rows.push_back(std::move(row));
        block.vectors.push_back(std::move(v));
      }
    };
    for (const auto& d : core.dees) {
      if (d.order > m || d.element.is_zero()) continue;
      if (d.order == m) {
        offer(d.element);
        continue;
      }
      for (const Word& z : enumerate_basis(m - d.order)) offer(concat(d.element, AlgElem::word(z)));
    }
    blocks.emplace(m, std::move(block));
  }
  return blocks;
}

// --- projection -----------------------------------------------------------

namespace {

RationalMatrix gram_matrix(const std::vector<SparseVector>& vs) {
  RationalMatrix g(vs.size(), RationalVector(vs.size()));
  for (std::size_t a = 0; a < vs.size(); ++a) {
    for (std::size_t b = a; b < vs.size(); ++b) {
      g[a][b] = dot(vs[a], vs[b]);
      g[b][a] = g[a][b];
    }
  }
  return g;
}

// Orthogonal projection of `target` onto the span of the independent vectors vs.
std::map<std::size_t, Rational> project_onto(const std::vector<SparseVector>& vs, const RationalMatrix& gram,
                                             const SparseVector& target) {
  RationalVector rhs(vs.size());
  for (std::size_t a = 0; a < vs.size(); ++a) rhs[a] = dot(vs[a], target);
  RationalVector x = solve_square(gram, rhs);
  std::map<std::size_t, Rational> out;
  for (std::size_t a = 0; a < vs.size(); ++a) {
    if (x[a] == 0) continue;
    for (const auto& [j, c] : vs[a]) {
      auto [slot, inserted] = out.try_emplace(j, 0);
      slot->second += x[a] * c;
      if (slot->second == 0) out.erase(slot);
    }
  }
  return out;
}

struct BlockProjector {
  bool through_complement = false;
  std::vector<SparseVector> spanning;  // block rows, or a basis of their complement
  RationalMatrix gram;
};

}  // namespace

Projection project(const CoreDecomposition& core, const std::map<int, IdealBlock>& blocks) {
  Projection proj;
  std::map<int, BlockProjector> projectors;
  for (const auto& l : core.ell) {
    proj.orders.push_back(l.order);
    auto it = blocks.find(l.order);
    if (it == blocks.end() || it->second.rows.empty()) {
      proj.ell_tilde.push_back(l.element);
      continue;
    }
    const IdealBlock& block = it->second;
    auto [pit, fresh] = projectors.try_emplace(l.order);
    BlockProjector& p = pit->second;
    if (fresh) {
      const std::size_t dim = graded_dimension(l.order);
      p.through_complement = 2 * block.rank() > dim;
      p.spanning = p.through_complement ? nullspace(block.vectors, dim) : block.vectors;
      p.gram = gram_matrix(p.spanning);
    }

    SparseVector target = vectorize_sparse(l.element, l.order);
    AlgElem tilde;
    if (p.through_complement) {
      if (!p.spanning.empty()) {
        auto words = enumerate_basis(l.order);
        for (const auto& [j, c] : project_onto(p.spanning, p.gram, target)) tilde.add(words[j], c);
      }
    } else {
      RationalVector rhs(p.spanning.size());
      for (std::size_t a = 0; a < rhs.size(); ++a) rhs[a] = dot(p.spanning[a], target);
      RationalVector x = solve_square(p.gram, rhs);
      tilde = l.element;
      for (std::size_t a = 0; a < x.size(); ++a) {
        if (x[a] != 0) tilde -= x[a] * block.rows[a];
      }
    }
    proj.ell_tilde.push_back(std::move(tilde));
  }
  return proj;
}

// --- shuffle polynomials --------------------------------------------------

namespace {

void enumerate_indices(const std::vector<int>& weights, std::size_t i, int remaining, std::vector<int>& current,
                       std::vector<std::vector<int>>& out) {
  if (i == weights.size()) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  for (int q = 0; q * weights[i] <= remaining; ++q) {
    current[i] = q;
    enumerate_indices(weights, i + 1, remaining - q * weights[i], current, out);
  }
  current[i] = 0;
}

}  // namespace

ShufflePolynomial express_as_shuffle_poly(const AlgElem& y, const std::vector<std::pair<AlgElem, int>>& basis_elems,
                                          int m) {
  if (m < 0) throw InputError("express_as_shuffle_poly: negative order");
  const std::size_t r = basis_elems.size();
  ShufflePolynomial out;
  if (m == 0) {
    if (y.size() > (y.scalar() != 0 ? 1u : 0u)) throw InputError("express_as_shuffle_poly: element is not a scalar");
    if (y.scalar() != 0) out.terms.emplace(std::vector<int>(r, 0), y.scalar());
    return out;
  }
  if (y.scalar() != 0 || !y.is_homogeneous(m)) {
    throw NotRepresentableError("element " + y.to_string() + " is not homogeneous of order " + std::to_string(m));
  }
  if (y.is_zero()) return out;

  std::vector<int> weights;
  for (const auto& [e, w] : basis_elems) {
    if (w < 1) throw InputError("express_as_shuffle_poly: weights must be positive");
    weights.push_back(w);
  }
  std::vector<std::vector<int>> indices;
  std::vector<int> current(r, 0);
  enumerate_indices(weights, 0, m, current, indices);

  std::vector<std::map<int, AlgElem>> powers(r);
  auto power = [&](std::size_t i, int q) -> const AlgElem& {
    auto it = powers[i].find(q);
    if (it == powers[i].end()) it = powers[i].emplace(q, shuffle_power(basis_elems[i].first, q)).first;
    return it->second;
  };

  RowEchelon echelon(/*track_combinations=*/true);
  std::vector<std::vector<int>> kept;
  for (const auto& q : indices) {
    AlgElem mono = AlgElem::scalar(1);
    for (std::size_t i = 0; i < r; ++i) {
      if (q[i]) mono = shuffle(mono, power(i, q[i]));
    }
    if (echelon.insert(vectorize_sparse(mono, m))) kept.push_back(q);
  }
  auto coords = echelon.coordinates(vectorize_sparse(y, m));
  if (!coords) {
    throw NotRepresentableError(y.to_string() + " is not a shuffle polynomial of the given elements");
  }
  for (std::size_t j = 0; j < kept.size(); ++j) {
    if ((*coords)[j] != 0) out.terms.emplace(kept[j], (*coords)[j]);
  }
  return out;
}

// --- reconstruction -------------------------------------------------------

namespace {

std::vector<std::pair<AlgElem, int>> leading(const Projection& proj, std::size_t count) {
  std::vector<std::pair<AlgElem, int>> out;
  for (std::size_t k = 0; k < count; ++k) out.emplace_back(proj.ell_tilde[k], proj.orders[k]);
  return out;
}

// Adds -coef * t^time * x^q for every term of p.
void subtract_monomials(Polynomial& target, const ShufflePolynomial& p, int time, int n) {
  for (const auto& [q, c] : p.terms) {
    Polynomial::Exponents e(n + 1, 0);
    e[0] = time;
    for (std::size_t k = 0; k < q.size(); ++k) e[k + 1] = q[k];
    target.add(e, -c);
  }
}

}  // namespace

LastLetterSplit split_by_last_letter(const AlgElem& l) {
  LastLetterSplit out;
  for (const auto& [word, c] : l.terms()) {
    if (word.empty()) throw InputError("split_by_last_letter: element has a scalar part");
    if (word.length() == 1) {
      out.alpha += c;
    } else {
      out.prefixes[word.last()].add(word.prefix(word.length() - 1), c);
    }
  }
  return out;
}

PolynomialSystem build_nonautonomous(const Projection& proj) {
  const int n = static_cast<int>(proj.ell_tilde.size());
  PolynomialSystem sys;
  sys.n = n;
  sys.a_hat.assign(n, Polynomial(n));
  sys.b_hat.assign(n, Polynomial(n));

  for (int i = 0; i < n; ++i) {
    const int w = proj.orders[i];
    const LastLetterSplit split = split_by_last_letter(proj.ell_tilde[i]);
    Polynomial::Exponents e(n + 1, 0);
    e[0] = w - 1;
    sys.b_hat[i].add(e, -split.alpha);

    const auto basis = leading(proj, i);
    for (const auto& [j, y] : split.prefixes) {
      subtract_monomials(sys.b_hat[i], express_as_shuffle_poly(y, basis, w - j - 1), j, n);
    }
  }
  return sys;
}

AutonomousOutcome build_autonomous(const Projection& proj) {
  const int n = static_cast<int>(proj.ell_tilde.size());
  PolynomialSystem sys;
  sys.n = n;
  sys.a_hat.assign(n, Polynomial(n));
  sys.b_hat.assign(n, Polynomial(n));

  const AlgElem& first = proj.ell_tilde[0];
  if (first.size() != 1 || first.terms().begin()->first != Word{0}) {
    return NoAutonomousApproximation{1, "ell_tilde", first};
  }
  sys.b_hat[0] = Polynomial::constant(n, -first.terms().begin()->second);

  for (int i = 1; i < n; ++i) {
    const auto basis = leading(proj, i);
    const int m = proj.orders[i] - 1;
    AlgElem d = phi(proj.ell_tilde[i]);
    try {
      subtract_monomials(sys.a_hat[i], express_as_shuffle_poly(d, basis, m), 0, n);
    } catch (const NotRepresentableError&) {
      return NoAutonomousApproximation{i + 1, "phi", d};
    }
    AlgElem p = psi(proj.ell_tilde[i]);
    try {
      subtract_monomials(sys.b_hat[i], express_as_shuffle_poly(p, basis, m), 0, n);
    } catch (const NotRepresentableError&) {
      return NoAutonomousApproximation{i + 1, "psi", p};
    }
  }
  return sys;
}

// --- pipeline -------------------------------------------------------------

AlgElem series_component(const SeriesTable& table, int k) {
  AlgElem out;
  for (const auto& [w, v] : table.coeffs) out.add(w, v.at(k));
  return out;
}

namespace {

ApproximationResult run_at(const ControlSystem& sys, int N, const PipelineOptions& options) {
  ApproximationResult result;
  result.n = sys.n;
  result.max_order = N;
  result.series = series_up_to(sys, N);
  result.basis = load_or_build_lie_basis(N, options.cache_dir);
  result.core = select_core(result.series, result.basis, sys.n);
  const int top = result.core.orders().back();
  std::erase_if(result.basis, [&](const LieBasisElement& g) { return g.order > top; });
  result.blocks = build_ideal_blocks(result.core);
  result.projection = project(result.core, result.blocks);
  result.nonautonomous = build_nonautonomous(result.projection);
  result.autonomous = build_autonomous(result.projection);
  return result;
}

}  // namespace

ApproximationResult approximate(const ControlSystem& sys, const PipelineOptions& options) {
  sys.validate();
  if (options.max_order) {
    if (*options.max_order < 1) throw InputError("maximal order must be at least 1");
    return run_at(sys, *options.max_order, options);
  }
  for (int N = std::min(sys.n, options.max_order_cap); N <= options.max_order_cap; ++N) {
    try {
      return run_at(sys, N, options);
    } catch (const NotAccessibleError&) {
      if (N == options.max_order_cap) throw;
    }
  }
  throw NotAccessibleError("system is not accessible up to order " + std::to_string(options.max_order_cap));
}

nlohmann::ordered_json ApproximationResult::to_json() const {
  auto core_json = [](const CoreElement& e) {
    return nlohmann::ordered_json{{"label", e.label()},
                                  {"order", e.order},
                                  {"element", elem_json(e.element)},
                                  {"v", vector_json(e.v)}};
  };
  nlohmann::ordered_json out;
  out["n"] = n;
  out["max_order"] = max_order;
  out["series"] = series.to_json();

  nlohmann::ordered_json ell = nlohmann::ordered_json::array();
  for (const auto& e : core.ell) ell.push_back(core_json(e));
  nlohmann::ordered_json dees = nlohmann::ordered_json::array();
  for (const auto& e : core.dees) dees.push_back(core_json(e));
  out["ell"] = ell;
  out["dees"] = dees;

  nlohmann::ordered_json ideal = nlohmann::ordered_json::array();
  for (const auto& [m, block] : blocks) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : block.rows) rows.push_back(elem_json(r));
    ideal.push_back({{"order", m}, {"rank", block.rank()}, {"rows", rows}});
  }
  out["ideal_blocks"] = ideal;

  nlohmann::ordered_json tilde = nlohmann::ordered_json::array();
  for (const auto& e : projection.ell_tilde) tilde.push_back(elem_json(e));
  out["ell_tilde"] = tilde;
  out["orders"] = projection.orders;
  out["nonautonomous"] = nonautonomous.to_json();
  if (const auto* sys = std::get_if<PolynomialSystem>(&autonomous)) {
    out["autonomous"] = sys->to_json();
  } else {
    const auto& none = std::get<NoAutonomousApproximation>(autonomous);
    out["autonomous"] = {{"nonexistent", true},
                         {"witness_index", none.index},
                         {"witness_component", none.component},
                         {"witness_element", elem_json(none.witness)},
                         {"witness_text", none.witness.to_string()}};
  }
  return out;
}

}  // namespace homapprox
