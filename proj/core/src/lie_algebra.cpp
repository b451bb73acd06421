#include "conic/lie_algebra.hpp"

#include "conic/errors.hpp"
#include "conic/linalg.hpp"

namespace conic {

void StructureConstants::set(int i, int j, int k, Rational value) {
  c[i][j][k] = value;
  c[j][i][k] = -value;
}

bool StructureConstants::jacobi_holds() const {
  // [[v_i, v_j], v_k] + cyclic = 0, expanded through the constants:
  // sum_l ( c[i][j][l] c[l][k][m] + c[j][k][l] c[l][i][m] + c[k][i][l] c[l][j][m] ) = 0.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) {
          Rational acc(0);
          for (int l = 0; l < 3; ++l) {
            acc += c[i][j][l] * c[l][k][m];
            acc += c[j][k][l] * c[l][i][m];
            acc += c[k][i][l] * c[l][j][m];
          }
          if (acc != 0) return false;
        }
  return true;
}

StructureConstants StructureConstants::change_basis(
    const std::array<std::array<Rational, 3>, 3>& p) const {
  // [w_a, w_b] = sum_{i,j} p[a][i] p[b][j] [v_i, v_j] = sum_k d[a][b][k] w_k
  // requires expressing v-coordinates back in the w basis, i.e. p^{-1}.
  const Rational det = p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
                       p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
                       p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
  if (det == 0) throw Error("basis change matrix is singular");
  std::array<std::array<Rational, 3>, 3> inv;
  inv[0][0] = (p[1][1] * p[2][2] - p[1][2] * p[2][1]) / det;
  inv[0][1] = (p[0][2] * p[2][1] - p[0][1] * p[2][2]) / det;
  inv[0][2] = (p[0][1] * p[1][2] - p[0][2] * p[1][1]) / det;
  inv[1][0] = (p[1][2] * p[2][0] - p[1][0] * p[2][2]) / det;
  inv[1][1] = (p[0][0] * p[2][2] - p[0][2] * p[2][0]) / det;
  inv[1][2] = (p[0][2] * p[1][0] - p[0][0] * p[1][2]) / det;
  inv[2][0] = (p[1][0] * p[2][1] - p[1][1] * p[2][0]) / det;
  inv[2][1] = (p[0][1] * p[2][0] - p[0][0] * p[2][1]) / det;
  inv[2][2] = (p[0][0] * p[1][1] - p[0][1] * p[1][0]) / det;

  StructureConstants out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int m = 0; m < 3; ++m) {
        Rational acc(0);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) acc += p[a][i] * p[b][j] * c[i][j][k] * inv[k][m];
        out.c[a][b][m] = acc;
      }
  return out;
}

std::string AlgebraClass::display() const {
  switch (tag) {
    case AlgebraTag::EllipticE2: return "L(3,4,0)";
    case AlgebraTag::HyperbolicP11: return "L(3,2,-1)";
    case AlgebraTag::ParabolicL322: return "L(3,2,2)";
    case AlgebraTag::Other: return "other";
  }
  return "other";
}

StructureConstants structure_constants(const SymmetryBasis& b) {
  if (b.dim() != 3) throw NotClosed("structure constants require a 3-dimensional basis");
  StructureConstants sc;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto coords = coordinates_in_span(lie_bracket(b.fields[i], b.fields[j]), b.fields);
      if (!coords) throw NotClosed("bracket leaves the span of the basis");
      for (int k = 0; k < 3; ++k) sc.set(i, j, k, (*coords)[k]);
    }
  return sc;
}

std::optional<std::array<std::array<Rational, 3>, 2>> abelian_ideal_2d(
    const StructureConstants& sc) {
  // Derived subalgebra: span of the images [v_i, v_j].
  std::vector<std::vector<Rational>> rows;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      rows.push_back({sc.c[i][j][0], sc.c[i][j][1], sc.c[i][j][2]});
  if (rref_exact(rows) != 2) return std::nullopt;

  auto bracket = [&](const std::vector<Rational>& u, const std::vector<Rational>& v) {
    std::array<Rational, 3> out{Rational(0), Rational(0), Rational(0)};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) out[k] += u[i] * v[j] * sc.c[i][j][k];
    return out;
  };
  auto in_span = [&](const std::array<Rational, 3>& v) {
    std::vector<std::vector<Rational>> probe = rows;
    probe.push_back({v[0], v[1], v[2]});
    return rref_exact(probe) == 2;
  };

  // Abelian: the bracket of the two generators vanishes.
  for (const Rational& entry : bracket(rows[0], rows[1]))
    if (entry != 0) return std::nullopt;
  // Ideal: brackets with the ambient basis stay inside.
  for (int i = 0; i < 3; ++i) {
    std::vector<Rational> e(3, Rational(0));
    e[i] = Rational(1);
    if (!in_span(bracket(e, rows[0])) || !in_span(bracket(e, rows[1]))) return std::nullopt;
  }

  return std::array<std::array<Rational, 3>, 2>{
      std::array<Rational, 3>{rows[0][0], rows[0][1], rows[0][2]},
      std::array<Rational, 3>{rows[1][0], rows[1][1], rows[1][2]}};
}

namespace {

// Derived ideal, a complement basis vector, and the 2x2 matrix m of the
// adjoint action X -> [X, l] restricted to the ideal (rows are the images of
// the ideal basis vectors in ideal coordinates).
struct IdealAction {
  std::array<std::array<Rational, 3>, 2> ideal;
  int complement = -1;
  std::array<std::array<Rational, 2>, 2> m;
};

std::optional<IdealAction> ideal_action(const StructureConstants& sc) {
  const auto ideal = abelian_ideal_2d(sc);
  if (!ideal) return std::nullopt;

  // Complement element: the last standard basis vector outside the ideal.
  // The induced action on the ideal does not depend on its I-component
  // because the ideal is abelian.
  int complement = -1;
  for (int i = 2; i >= 0; --i) {
    std::vector<std::vector<Rational>> probe = {
        {(*ideal)[0][0], (*ideal)[0][1], (*ideal)[0][2]},
        {(*ideal)[1][0], (*ideal)[1][1], (*ideal)[1][2]},
        {Rational(i == 0), Rational(i == 1), Rational(i == 2)}};
    if (rref_exact(probe) == 3) {
      complement = i;
      break;
    }
  }
  if (complement == -1) return std::nullopt;

  auto bracket_with_complement = [&](const std::array<Rational, 3>& u) {
    std::array<Rational, 3> r{Rational(0), Rational(0), Rational(0)};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) r[k] += u[i] * sc.c[i][complement][k];
    return r;
  };
  IdealAction out;
  out.ideal = *ideal;
  out.complement = complement;
  for (int a = 0; a < 2; ++a) {
    const auto image = bracket_with_complement((*ideal)[a]);
    std::vector<std::vector<Rational>> cols = {
        {(*ideal)[0][0], (*ideal)[0][1], (*ideal)[0][2]},
        {(*ideal)[1][0], (*ideal)[1][1], (*ideal)[1][2]}};
    const auto coords = solve_exact(cols, {image[0], image[1], image[2]});
    if (!coords) return std::nullopt;
    out.m[a] = {(*coords)[0], (*coords)[1]};
  }
  return out;
}

}  // namespace

AlgebraClass classify_algebra(const StructureConstants& sc) {
  AlgebraClass out;
  const auto action = ideal_action(sc);
  if (!action) return out;
  const auto& m = action->m;

  out.trace = m[0][0] + m[1][1];
  out.det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  out.discriminant = out.trace * out.trace - 4 * out.det;

  if (out.trace == 0 && out.det > 0) {
    out.tag = AlgebraTag::EllipticE2;
  } else if (out.trace == 0 && out.det < 0) {
    out.tag = AlgebraTag::HyperbolicP11;
  } else if (out.trace != 0 && out.det > 0 && 2 * out.trace * out.trace == 9 * out.det) {
    out.tag = AlgebraTag::ParabolicL322;
  } else {
    out.tag = AlgebraTag::Other;
  }
  return out;
}

std::optional<std::array<std::array<Rational, 3>, 2>> normalized_ideal_frame(
    const StructureConstants& sc) {
  const auto action = ideal_action(sc);
  if (!action) return std::nullopt;
  const AlgebraClass cls = classify_algebra(sc);
  if (cls.tag == AlgebraTag::Other) return action->ideal;

  // Coordinates relative to the ideal basis transform by m^T under [., l].
  const auto& m = action->m;
  auto apply_mt = [&m](const std::array<Rational, 2>& u) {
    return std::array<Rational, 2>{m[0][0] * u[0] + m[1][0] * u[1],
                                   m[0][1] * u[0] + m[1][1] * u[1]};
  };
  auto dependent = [](const std::array<Rational, 2>& a, const std::array<Rational, 2>& b) {
    return a[0] * b[1] - a[1] * b[0] == 0;
  };

  std::array<Rational, 2> u1{Rational(1), Rational(0)};
  std::array<Rational, 2> u2{Rational(0), Rational(1)};
  if (cls.tag == AlgebraTag::ParabolicL322) {
    // Rational eigenvectors for the eigenvalues 2s and s, s = trace / 3.
    const Rational s = cls.trace / 3;
    auto eigenvector = [&](const Rational& lambda) {
      // kernel of m^T - lambda I
      const Rational a = m[0][0] - lambda, b = m[1][0];
      const Rational c = m[0][1], d = m[1][1] - lambda;
      if (a != 0 || b != 0) return std::array<Rational, 2>{-b, a};
      return std::array<Rational, 2>{-d, c};
    };
    u1 = eigenvector(2 * s);
    u2 = eigenvector(s);
    if (dependent(u1, u2)) return action->ideal;  // defensive, cannot happen for 2s != s
  } else {
    // u2 = -+ (1/s) m^T u1 with s^2 = |det|; Cayley-Hamilton gives the
    // companion relation (m^T)^2 = -det I when the trace vanishes.
    const Rational s = rational_sqrt(cls.det > 0 ? cls.det : Rational(-cls.det));
    if (s == 0) return action->ideal;
    for (const auto& candidate :
         {std::array<Rational, 2>{Rational(1), Rational(0)},
          std::array<Rational, 2>{Rational(0), Rational(1)},
          std::array<Rational, 2>{Rational(1), Rational(1)}}) {
      const auto image = apply_mt(candidate);
      if (dependent(candidate, image)) continue;  // eigenvector, try the next one
      u1 = candidate;
      if (cls.tag == AlgebraTag::EllipticE2) {
        u2 = {-image[0] / s, -image[1] / s};
      } else {
        u2 = {image[0] / s, image[1] / s};
      }
      break;
    }
  }

  std::array<std::array<Rational, 3>, 2> frame{};
  for (int k = 0; k < 3; ++k) {
    frame[0][k] = u1[0] * action->ideal[0][k] + u1[1] * action->ideal[1][k];
    frame[1][k] = u2[0] * action->ideal[0][k] + u2[1] * action->ideal[1][k];
  }
  return frame;
}

}  // namespace conic
