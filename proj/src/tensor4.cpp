#include "curv4/tensor4.hpp"

#include <cmath>

namespace curv4 {

namespace {

// Index pairs spanning the 2-form space, in lexicographic order.
constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

// Self-dual / anti-self-dual unit 2-forms in the pair basis above.
// Hodge star (orientation e0^e1^e2^e3): *e01=e23, *e02=-e13, *e03=e12.
const double kSqrtHalf = std::sqrt(0.5);

constexpr double kSigmaPlus[3][6] = {
    {1, 0, 0, 0, 0, 1},
    {0, 1, 0, 0, -1, 0},
    {0, 0, 1, 1, 0, 0},
};
constexpr double kSigmaMinus[3][6] = {
    {1, 0, 0, 0, 0, -1},
    {0, 1, 0, 0, 1, 0},
    {0, 0, 1, -1, 0, 0},
};

using Mat6 = Eigen::Matrix<double, 6, 6>;

// Curvature tensor as an operator on the 2-form space.
Mat6 pair_matrix(const CurvatureTensor& t) {
  Mat6 m;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      m(a, b) = t.at(kPairs[a][0], kPairs[a][1], kPairs[b][0], kPairs[b][1]);
  return m;
}

Eigen::Matrix<double, 3, 6> sigma_basis(bool plus) {
  Eigen::Matrix<double, 3, 6> s;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 6; ++b) s(a, b) = kSqrtHalf * (plus ? kSigmaPlus[a][b] : kSigmaMinus[a][b]);
  return s;
}

// Writes a pair-basis operator back into rank-4 components.
void add_pair_matrix(std::array<double, 256>& c, const Mat6& m) {
  auto put = [&c](int i, int j, int k, int l, double v) {
    c[((i * 4 + j) * 4 + k) * 4 + l] += v;
  };
  for (int a = 0; a < 6; ++a) {
    const int i = kPairs[a][0], j = kPairs[a][1];
    for (int b = 0; b < 6; ++b) {
      const int k = kPairs[b][0], l = kPairs[b][1];
      const double v = m(a, b);
      put(i, j, k, l, v);
      put(j, i, k, l, -v);
      put(i, j, l, k, -v);
      put(j, i, l, k, v);
    }
  }
}

}  // namespace

CurvatureTensor CurvatureTensor::constant_curvature(double kappa) {
  CurvatureTensor t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          t.c_[idx(i, j, k, l)] = kappa * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
  return t;
}

double CurvatureTensor::symmetry_residual(const std::array<double, 256>& c, std::string* which) {
  auto at = [&c](int i, int j, int k, int l) { return c[((i * 4 + j) * 4 + k) * 4 + l]; };
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  double worst = 0.0;
  std::string name;
  auto track = [&](double v, const char* n) {
    if (v > worst) {
      worst = v;
      name = n;
    }
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          track(std::abs(at(i, j, k, l) + at(j, i, k, l)), "antisymmetry in first index pair");
          track(std::abs(at(i, j, k, l) + at(i, j, l, k)), "antisymmetry in last index pair");
          track(std::abs(at(i, j, k, l) - at(k, l, i, j)), "pair interchange symmetry");
          track(std::abs(at(i, j, k, l) + at(i, k, l, j) + at(i, l, j, k)), "first Bianchi identity");
        }
  if (which) *which = name;
  return worst / scale;
}

CurvatureTensor CurvatureTensor::from_components(const std::array<double, 256>& c, double tol) {
  std::string which;
  const double res = symmetry_residual(c, &which);
  if (res > tol) {
    throw NumericDomainError("tensor4: curvature input rejected, violated symmetry: " + which +
                             " (relative residual " + std::to_string(res) + ")");
  }
  return project(c);
}

CurvatureTensor CurvatureTensor::project(const std::array<double, 256>& c) {
  // Antisymmetrize both pairs, symmetrize pair interchange, then remove the
  // totally antisymmetric (Bianchi) part.
  auto at = [&c](int i, int j, int k, int l) { return c[((i * 4 + j) * 4 + k) * 4 + l]; };
  std::array<double, 256> a{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          a[idx(i, j, k, l)] =
              0.25 * (at(i, j, k, l) - at(j, i, k, l) - at(i, j, l, k) + at(j, i, l, k));
  std::array<double, 256> b{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          b[idx(i, j, k, l)] = 0.5 * (a[idx(i, j, k, l)] + a[idx(k, l, i, j)]);
  CurvatureTensor t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double cyc = b[idx(i, j, k, l)] + b[idx(i, k, l, j)] + b[idx(i, l, j, k)];
          t.c_[idx(i, j, k, l)] = b[idx(i, j, k, l)] - cyc / 3.0;
        }
  return t;
}

double CurvatureTensor::norm2() const {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return s;
}

double CurvatureTensor::norm() const { return std::sqrt(norm2()); }

CurvatureTensor CurvatureTensor::operator+(const CurvatureTensor& o) const {
  CurvatureTensor t;
  for (int i = 0; i < 256; ++i) t.c_[i] = c_[i] + o.c_[i];
  return t;
}

CurvatureTensor CurvatureTensor::operator-(const CurvatureTensor& o) const {
  CurvatureTensor t;
  for (int i = 0; i < 256; ++i) t.c_[i] = c_[i] - o.c_[i];
  return t;
}

CurvatureTensor CurvatureTensor::operator*(double s) const {
  CurvatureTensor t;
  for (int i = 0; i < 256; ++i) t.c_[i] = c_[i] * s;
  return t;
}

CurvatureDecomposition decompose(const CurvatureTensor& rm) {
  CurvatureDecomposition dec;
  Mat4 ric = Mat4::Zero();
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += rm.at(i, j, i, l);
      ric(j, l) = s;
    }
  dec.scalar = ric.trace();
  dec.ric0 = ric - (dec.scalar / 4.0) * Mat4::Identity();

  // Subtract the scalar and traceless-Ricci parts; what remains is Weyl.
  CurvatureTensor weyl = rm;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double gik = (i == k), gjl = (j == l), gil = (i == l), gjk = (j == k);
          const double scal = (dec.scalar / 12.0) * (gik * gjl - gil * gjk);
          const double ricp = 0.5 * (dec.ric0(i, k) * gjl - dec.ric0(i, l) * gjk +
                                     gik * dec.ric0(j, l) - gil * dec.ric0(j, k));
          weyl.ref(i, j, k, l) -= scal + ricp;
        }

  const Mat6 w6 = pair_matrix(weyl);
  const auto sp = sigma_basis(true);
  const auto sm = sigma_basis(false);
  dec.wplus = sp * w6 * sp.transpose();
  dec.wminus = sm * w6 * sm.transpose();
  return dec;
}

CurvatureTensor reassemble(const CurvatureDecomposition& dec) {
  std::array<double, 256> c{};
  auto put = [&c](int i, int j, int k, int l, double v) {
    c[((i * 4 + j) * 4 + k) * 4 + l] += v;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double gik = (i == k), gjl = (j == l), gil = (i == l), gjk = (j == k);
          const double scal = (dec.scalar / 12.0) * (gik * gjl - gil * gjk);
          const double ricp = 0.5 * (dec.ric0(i, k) * gjl - dec.ric0(i, l) * gjk +
                                     gik * dec.ric0(j, l) - gil * dec.ric0(j, k));
          put(i, j, k, l, scal + ricp);
        }
  const auto sp = sigma_basis(true);
  const auto sm = sigma_basis(false);
  const Mat6 w6 = sp.transpose() * dec.wplus * sp + sm.transpose() * dec.wminus * sm;
  add_pair_matrix(c, w6);
  return CurvatureTensor::from_components_unchecked(c);
}

NormReport norms_and_identities(const CurvatureDecomposition& dec) {
  NormReport r;
  r.scalar2 = dec.scalar * dec.scalar;
  r.ric02 = dec.ric0.squaredNorm();
  // Tensor norm of the Weyl parts is 4x the Frobenius norm of the 2-form
  // blocks (each pair-index slot appears in 4 signed copies).
  r.wplus2 = 4.0 * dec.wplus.squaredNorm();
  r.wminus2 = 4.0 * dec.wminus.squaredNorm();
  r.rm2 = reassemble(dec).norm2();
  r.identity_residual = r.rm2 - (r.scalar2 / 6.0 + 2.0 * r.ric02 + r.wplus2 + r.wminus2);
  return r;
}

CharacteristicDensities characteristic_densities(const CurvatureDecomposition& dec) {
  const NormReport n = norms_and_identities(dec);
  CharacteristicDensities d;
  const double pi2 = kPi * kPi;
  d.pchi = (n.scalar2 / 24.0 - n.ric02 / 2.0 + n.wplus2 / 4.0 + n.wminus2 / 4.0) / (8.0 * pi2);
  d.ptau = (n.wplus2 / 4.0 - n.wminus2 / 4.0) / (12.0 * pi2);
  d.combined = 32.0 * pi2 * (d.pchi + 3.0 * d.ptau);
  d.energy_identity_residual = n.rm2 - (n.scalar2 / 3.0 + 4.0 * n.wplus2 - d.combined);
  d.alt_combined = 32.0 * pi2 * (d.pchi + d.ptau);
  d.alt_energy_identity_residual = n.rm2 - (n.scalar2 / 3.0 + 4.0 * n.wplus2 - d.alt_combined);
  return d;
}

CurvatureTensor rotate_frame(const CurvatureTensor& rm, const Mat4& q) {
  // Contract one index at a time; 4 passes of 4^5 multiplies.
  std::array<double, 256> a = rm.components(), b{};
  for (int pass = 0; pass < 4; ++pass) {
    b.fill(0.0);
    for (int i = 0; i < 64; ++i)
      for (int m = 0; m < 4; ++m) {
        const double v = a[i * 4 + m];
        if (v == 0.0) continue;
        for (int n = 0; n < 4; ++n) b[i * 4 + n] += v * q(m, n);
      }
    // Rotate the component order so each pass contracts the last slot.
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            a[((l * 4 + i) * 4 + j) * 4 + k] = b[((i * 4 + j) * 4 + k) * 4 + l];
  }
  return CurvatureTensor::from_components_unchecked(a);
}

std::array<double, 3> decomposition_cross_products(const CurvatureDecomposition& dec) {
  CurvatureDecomposition only_scalar, only_ric, only_weyl;
  only_scalar.scalar = dec.scalar;
  only_ric.ric0 = dec.ric0;
  only_weyl.wplus = dec.wplus;
  only_weyl.wminus = dec.wminus;
  const CurvatureTensor s = reassemble(only_scalar);
  const CurvatureTensor e = reassemble(only_ric);
  const CurvatureTensor w = reassemble(only_weyl);
  auto dot = [](const CurvatureTensor& x, const CurvatureTensor& y) {
    double acc = 0.0;
    for (int i = 0; i < 256; ++i) acc += x.components()[i] * y.components()[i];
    return acc;
  };
  return {dot(s, e), dot(s, w), dot(e, w)};
}

CurvatureTensor random_curvature_tensor(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<double, 256> c{};
  for (double& v : c) v = u(rng);
  // from_components would reject raw noise; run the projection directly.
  auto at = [&c](int i, int j, int k, int l) { return c[((i * 4 + j) * 4 + k) * 4 + l]; };
  std::array<double, 256> a{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          a[((i * 4 + j) * 4 + k) * 4 + l] =
              0.25 * (at(i, j, k, l) - at(j, i, k, l) - at(i, j, l, k) + at(j, i, l, k));
  std::array<double, 256> b{};
  auto ax = [&a](int i, int j, int k, int l) { return a[((i * 4 + j) * 4 + k) * 4 + l]; };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          b[((i * 4 + j) * 4 + k) * 4 + l] = 0.5 * (ax(i, j, k, l) + ax(k, l, i, j));
  auto bx = [&b](int i, int j, int k, int l) { return b[((i * 4 + j) * 4 + k) * 4 + l]; };
  std::array<double, 256> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double cyc = bx(i, j, k, l) + bx(i, k, l, j) + bx(i, l, j, k);
          out[((i * 4 + j) * 4 + k) * 4 + l] = bx(i, j, k, l) - cyc / 3.0;
        }
  return CurvatureTensor::from_components(out);
}

Mat4 random_rotation(std::mt19937_64& rng, bool orientation_preserving) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = g(rng);
  const Eigen::HouseholderQR<Mat4> qr(m);
  Mat4 q = qr.householderQ();
  if ((q.determinant() > 0) != orientation_preserving) q.col(0) = -q.col(0);
  return q;
}

}  // namespace curv4
