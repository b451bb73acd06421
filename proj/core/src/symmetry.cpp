#include "conic/symmetry.hpp"

#include <map>
#include <utility>

#include "conic/errors.hpp"
#include "conic/linalg.hpp"

namespace conic {

std::vector<Monomial> ansatz_monomials(const Ansatz& a) {
  std::vector<Monomial> out;
  for (int px = 0; px <= a.degree; ++px) {
    for (int py = 0; py + px <= a.degree; ++py) {
      for (int pw = 0; pw + py + px <= a.degree; ++pw) {
        for (int t = 0; t <= 2 * a.trig_max; ++t) {
          for (int n = -a.exp_range; n <= a.exp_range; ++n) {
            Monomial m;
            m.px = px;
            m.py = py;
            m.pw = pw;
            if (t > 0) {
              m.trig = (t % 2 == 1) ? TrigKind::Cos : TrigKind::Sin;
              m.trig_freq = (t + 1) / 2;
            }
            if (n != 0) {
              m.exp_present = true;
              m.exp_freq = n;
            }
            out.push_back(std::move(m));
          }
        }
      }
    }
  }
  return out;
}

bool is_symmetry(const VectorField& v, const ControlSystem& s) {
  for (const Expr& e : wedge(lie_bracket(v, s.g), s.g)) {
    if (!e.is_zero()) return false;
  }
  for (const Expr& e : wedge(lie_bracket(v, s.f), s.g)) {
    if (!e.is_zero()) return false;
  }
  return true;
}

namespace {

// Rectified fast path: for g = q dw the condition [v, g] in G says exactly
// that v_x and v_y are independent of w, and [v, f] in G reduces to the two
// component equations [v, f]^x = [v, f]^y = 0. The search space shrinks to
// w-free monomials in the first two components.
SymmetryBasis solve_rectified(const VectorField& f, const Ansatz& a) {
  const std::vector<Monomial> full = ansatz_monomials(a);
  std::vector<Monomial> planar;  // w-independent monomials for v_x, v_y
  for (const Monomial& m : full) {
    if (m.pw == 0 && m.trig == TrigKind::None && !m.exp_present) planar.push_back(m);
  }
  const int n_planar = static_cast<int>(planar.size());
  const int n_full = static_cast<int>(full.size());
  const int unknowns = 2 * n_planar + n_full;

  std::array<std::array<Expr, 2>, 3> df;  // df[j][i] = d f^i / d x_j, i in {x, y}
  for (int j = 0; j < 3; ++j) {
    const Var var = j == 0 ? Var::X : (j == 1 ? Var::Y : Var::W);
    df[j][0] = f.x.derivative(var);
    df[j][1] = f.y.derivative(var);
  }

  std::map<Monomial, int> monomial_ids;
  std::vector<SparseRow> rows;  // index = 2 * monomial_id + equation
  auto stamp = [&](int equation, const Expr& e, int col) {
    for (const auto& [mono, coeff] : e.terms()) {
      auto [it, fresh] = monomial_ids.emplace(mono, static_cast<int>(monomial_ids.size()));
      const std::size_t row = 2 * static_cast<std::size_t>(it->second) + equation;
      if (row >= rows.size()) rows.resize(row + 2 - equation);
      rows[row].emplace_back(col, coeff);
    }
  };

  // [mu d_comp, f]^i = mu df^i/dx_comp - delta_{i,comp} sum_j f^j dmu/dx_j
  auto stamp_unknown = [&](int comp, const Monomial& mono, int col) {
    const Expr mu = Expr::monomial(mono, Rational(1));
    for (int i = 0; i < 2; ++i) {
      Expr out = mu * df[comp][i];
      if (i == comp) {
        out -= f.x * mu.derivative(Var::X);
        out -= f.y * mu.derivative(Var::Y);
        out -= f.w * mu.derivative(Var::W);
      }
      if (!out.is_zero()) stamp(i, out, col);
    }
  };
  for (int b = 0; b < n_planar; ++b) stamp_unknown(0, planar[b], b);
  for (int b = 0; b < n_planar; ++b) stamp_unknown(1, planar[b], n_planar + b);
  for (int b = 0; b < n_full; ++b) stamp_unknown(2, full[b], 2 * n_planar + b);

  std::vector<SparseRow> matrix;
  matrix.reserve(rows.size());
  for (auto& row : rows) {
    if (!row.empty()) matrix.push_back(std::move(row));
  }
  const NullspaceResult kernel = nullspace(matrix, unknowns);

  SymmetryBasis result;
  result.fields.reserve(kernel.basis.size());
  for (const auto& vec : kernel.basis) {
    VectorField v;
    for (int b = 0; b < n_planar; ++b) {
      if (vec[b] != 0) v.x += Expr::monomial(planar[b], vec[b]);
      if (vec[n_planar + b] != 0) v.y += Expr::monomial(planar[b], vec[n_planar + b]);
    }
    for (int b = 0; b < n_full; ++b) {
      if (vec[2 * n_planar + b] != 0) v.w += Expr::monomial(full[b], vec[2 * n_planar + b]);
    }
    result.fields.push_back(std::move(v));
  }
  return result;
}

// Constant value of a field when all three components are constants.
std::optional<std::array<Rational, 3>> constant_field_value(const VectorField& v) {
  std::array<Rational, 3> out;
  for (int i = 0; i < 3; ++i) {
    const auto c = v.component(i).as_constant();
    if (!c) return std::nullopt;
    out[i] = *c;
  }
  return out;
}

}  // namespace

SymmetryBasis solve_symmetries(const ControlSystem& s, const Ansatz& a) {
  const std::vector<Monomial> basis = ansatz_monomials(a);
  const int per_component = static_cast<int>(basis.size());
  const int unknowns = 3 * per_component;
  if (unknowns > 100000) throw AnsatzTooLarge("ansatz produces more than 10^5 unknowns");

  // A constant control field with a nonzero w-component can be sheared onto
  // the w-axis by an exact unimodular map that fixes w. The shear maps the
  // ansatz space onto itself, so conjugating, solving the rectified problem
  // and pushing the span back is an exact shortcut, not an approximation.
  if (const auto g_const = constant_field_value(s.g)) {
    const auto& c = *g_const;
    if (c[2] != 0) {
      if (c[0] == 0 && c[1] == 0) return solve_rectified(s.f, a);
      AffineMap shear = AffineMap::identity();
      shear.linear[0][2] = -c[0] / c[2];
      shear.linear[1][2] = -c[1] / c[2];
      const VectorField f_sheared = pushforward(s.f, shear);
      SymmetryBasis sheared = solve_rectified(f_sheared, a);
      const AffineMap back = shear.inverse();
      for (VectorField& v : sheared.fields) v = pushforward(v, back);
      return sheared;
    }
  }

  // The bracket with a single-monomial field mu d_comp is
  //   [mu d_comp, T]^i = mu * dT^i/dx_comp - delta_{i,comp} sum_j T^j dmu/dx_j,
  // so each wedge entry against g is bilinear in (mu, dmu) with fixed
  // expression coefficients. Precomputing those turns the assembly into
  // single-monomial times fixed-expression products:
  //   wedge([mu d_comp, T], g)_k = mu * A[T][comp][k]
  //                                - sum_j dmu/dx_j * B[T][comp][k][j]
  // with A = dT[a][comp] g_b - dT[b][comp] g_a for the minor pair (a, b) of k,
  // and B[..][j] = (delta_{a,comp} g_b - delta_{b,comp} g_a) * T_j.
  std::array<std::array<Expr, 3>, 3> df, dg;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Var var = j == 0 ? Var::X : (j == 1 ? Var::Y : Var::W);
      df[i][j] = s.f.component(i).derivative(var);
      dg[i][j] = s.g.component(i).derivative(var);
    }
  }
  constexpr int minor_a[3] = {1, 2, 0};
  constexpr int minor_b[3] = {2, 0, 1};
  // index 0: condition on [v, g]; index 1: condition on [v, f]
  Expr coeff_mu[2][3][3];
  Expr coeff_dmu[2][3][3][3];
  for (int cond = 0; cond < 2; ++cond) {
    const VectorField& target = cond == 0 ? s.g : s.f;
    const auto& dt = cond == 0 ? dg : df;
    for (int comp = 0; comp < 3; ++comp) {
      for (int k = 0; k < 3; ++k) {
        const int a = minor_a[k], b = minor_b[k];
        coeff_mu[cond][comp][k] =
            dt[a][comp] * s.g.component(b) - dt[b][comp] * s.g.component(a);
        Expr delta_part;
        if (comp == a) delta_part = s.g.component(b);
        if (comp == b) delta_part -= s.g.component(a);
        if (!delta_part.is_zero()) {
          for (int j = 0; j < 3; ++j)
            coeff_dmu[cond][comp][k][j] = delta_part * target.component(j);
        }
      }
    }
  }

  // Rows keyed by output monomial (interned) and wedge index 0..5.
  std::map<Monomial, int> monomial_ids;
  std::vector<SparseRow> rows;  // index = 6 * monomial_id + wedge_index
  auto stamp = [&](int wedge_index, const Expr& e, int col) {
    for (const auto& [mono, coeff] : e.terms()) {
      auto [it, fresh] = monomial_ids.emplace(mono, static_cast<int>(monomial_ids.size()));
      const std::size_t row = 6 * static_cast<std::size_t>(it->second) + wedge_index;
      if (row >= rows.size()) rows.resize(row + 6 - wedge_index);
      rows[row].emplace_back(col, coeff);
    }
  };

  for (int comp = 0; comp < 3; ++comp) {
    for (int b = 0; b < per_component; ++b) {
      const int col = comp * per_component + b;
      const Expr mu = Expr::monomial(basis[b], Rational(1));
      const Expr dmu[3] = {mu.derivative(Var::X), mu.derivative(Var::Y), mu.derivative(Var::W)};
      for (int cond = 0; cond < 2; ++cond) {
        for (int k = 0; k < 3; ++k) {
          Expr out = mu * coeff_mu[cond][comp][k];
          for (int j = 0; j < 3; ++j) {
            if (!dmu[j].is_zero() && !coeff_dmu[cond][comp][k][j].is_zero())
              out -= dmu[j] * coeff_dmu[cond][comp][k][j];
          }
          if (!out.is_zero()) stamp(cond * 3 + k, out, col);
        }
      }
    }
  }

  std::vector<SparseRow> matrix;
  matrix.reserve(rows.size());
  for (auto& row : rows) {
    if (!row.empty()) matrix.push_back(std::move(row));
  }

  const NullspaceResult kernel = nullspace(matrix, unknowns);

  SymmetryBasis result;
  result.fields.reserve(kernel.basis.size());
  for (const auto& vec : kernel.basis) {
    VectorField v;
    for (int comp = 0; comp < 3; ++comp) {
      Expr e;
      for (int b = 0; b < per_component; ++b) {
        const Rational& c = vec[comp * per_component + b];
        if (c != 0) e += Expr::monomial(basis[b], c);
      }
      v.component(comp) = e;
    }
    result.fields.push_back(std::move(v));
  }
  return result;
}

namespace {

// Stacks the coefficient vectors of the fields over the union of their
// monomial supports: one dense column per field, one row per (component,
// monomial) slot that occurs somewhere.
std::pair<std::vector<std::vector<Rational>>, std::vector<Rational>> stack_coefficients(
    const std::vector<VectorField>& columns, const VectorField& target) {
  std::map<std::pair<int, Monomial>, int> slot;
  auto note = [&](const VectorField& v) {
    for (int comp = 0; comp < 3; ++comp)
      for (const auto& [m, c] : v.component(comp).terms()) {
        slot.emplace(std::make_pair(comp, m), 0);
      }
  };
  for (const auto& v : columns) note(v);
  note(target);
  int index = 0;
  for (auto& [key, pos] : slot) pos = index++;

  std::vector<std::vector<Rational>> cols(columns.size(),
                                          std::vector<Rational>(slot.size(), Rational(0)));
  std::vector<Rational> rhs(slot.size(), Rational(0));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (int comp = 0; comp < 3; ++comp)
      for (const auto& [m, c] : columns[j].component(comp).terms())
        cols[j][slot.at({comp, m})] = c;
  for (int comp = 0; comp < 3; ++comp)
    for (const auto& [m, c] : target.component(comp).terms()) rhs[slot.at({comp, m})] = c;
  return {std::move(cols), std::move(rhs)};
}

}  // namespace

std::optional<std::vector<Rational>> coordinates_in_span(const VectorField& v,
                                                         const std::vector<VectorField>& basis) {
  auto [cols, rhs] = stack_coefficients(basis, v);
  return solve_exact(cols, rhs);
}

bool spans_equal(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
  for (const auto& v : a)
    if (!coordinates_in_span(v, b)) return false;
  for (const auto& v : b)
    if (!coordinates_in_span(v, a)) return false;
  return true;
}

bool closed_under_bracket(const SymmetryBasis& b) {
  for (int i = 0; i < b.dim(); ++i)
    for (int j = i + 1; j < b.dim(); ++j) {
      if (!coordinates_in_span(lie_bracket(b.fields[i], b.fields[j]), b.fields)) return false;
    }
  return true;
}

}  // namespace conic
