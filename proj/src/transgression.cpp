#include "curv4/transgression.hpp"

#include <cmath>

namespace curv4 {

namespace {

// Permutations of (0,1,2,3) with signs, for the epsilon pairing.
struct Perm {
  int a, b, c, d, sign;
};
const Perm kEps[24] = {
    {0, 1, 2, 3, 1},  {0, 1, 3, 2, -1}, {0, 2, 1, 3, -1}, {0, 2, 3, 1, 1},  {0, 3, 1, 2, 1},
    {0, 3, 2, 1, -1}, {1, 0, 2, 3, -1}, {1, 0, 3, 2, 1},  {1, 2, 0, 3, 1},  {1, 2, 3, 0, -1},
    {1, 3, 0, 2, -1}, {1, 3, 2, 0, 1},  {2, 0, 1, 3, 1},  {2, 0, 3, 1, -1}, {2, 1, 0, 3, -1},
    {2, 1, 3, 0, 1},  {2, 3, 0, 1, 1},  {2, 3, 1, 0, -1}, {3, 0, 1, 2, -1}, {3, 0, 2, 1, 1},
    {3, 1, 0, 2, 1},  {3, 1, 2, 0, -1}, {3, 2, 0, 1, -1}, {3, 2, 1, 0, 1}};

double pair_eps(const Mat4& m, const Mat4& n) {
  double s = 0.0;
  for (const auto& p : kEps) s += p.sign * m(p.a, p.b) * n(p.c, p.d);
  return s;
}

double pair_tr(const Mat4& m, const Mat4& n) { return (m * n).trace(); }

// Alternating sum over the three 2+2 splits of the form slots.
template <typename Pair>
double form_pairing_22(const SkewForm2& f, const SkewForm2& g, Pair&& p) {
  return p(f.comp[0][1], g.comp[2][3]) - p(f.comp[0][2], g.comp[1][3]) +
         p(f.comp[0][3], g.comp[1][2]) + p(f.comp[2][3], g.comp[0][1]) -
         p(f.comp[1][3], g.comp[0][2]) + p(f.comp[1][2], g.comp[0][3]);
}

// Degree 1+2 pairing on an ascending triple (mu, nu, rho).
template <typename Pair>
double form_pairing_12(const SkewForm1& k, const SkewForm2& g, int mu, int nu, int rho, Pair&& p) {
  return p(k.comp[mu], g.comp[nu][rho]) - p(k.comp[nu], g.comp[mu][rho]) +
         p(k.comp[rho], g.comp[mu][nu]);
}

// The transgression prefactor: P(F~,F~) - P(F,F) = -2 d int_0^1 P(K, F_t) dt.
constexpr double kTransgressionFactor = -2.0;

}  // namespace

Transgression::Transgression(const ModelManifold& model)
    : model_(&model), chart_(model.metric_chart()) {
  if (!chart_)
    throw NumericDomainError("transgression: model " + model.name() + " exposes no metric chart");
  StructureChart sc;
  sc.fields = model.killing_fields();
  if (sc.fields.empty())
    throw NumericDomainError("transgression: model " + model.name() +
                             " supplies no Killing fields");
  charts_.push_back(std::move(sc));
}

Transgression::Transgression(const ModelManifold& model, std::vector<StructureChart> charts)
    : model_(&model), chart_(model.metric_chart()), charts_(std::move(charts)) {
  if (!chart_)
    throw NumericDomainError("transgression: model " + model.name() + " exposes no metric chart");
  if (charts_.empty()) throw NumericDomainError("transgression: no structure charts supplied");
}

SkewForm1 Transgression::connection(const Vec4& x) const {
  const auto gamma = chart_->christoffels(x);
  const Mat4 theta = chart_->coframe(x);
  const Mat4 e = chart_->frame(x);
  // dE/dx^mu by 4th-order central differences of the (analytic) frame.
  const double h = fd_step_;
  SkewForm1 a;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 step = Vec4::Zero();
    step(mu) = h;
    const Mat4 de = (-chart_->frame(x + 2 * step) + 8.0 * chart_->frame(x + step) -
                     8.0 * chart_->frame(x - step) + chart_->frame(x - 2 * step)) /
                    (12.0 * h);
    Mat4 cov;  // cov(lambda, b) = d_mu E_b^lambda + G^lambda_{mu sigma} E_b^sigma
    for (int lam = 0; lam < 4; ++lam)
      for (int b = 0; b < 4; ++b) cov(lam, b) = de(lam, b) + gamma[lam].row(mu).dot(e.col(b));
    a.comp[mu] = theta * cov;
  }
  return a;
}

SkewForm2 Transgression::curvature(const Vec4& x) const {
  const CurvatureTensor rm = model_->curvature_at({0, x});
  const Mat4 theta = chart_->coframe(x);
  SkewForm2 f;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      Mat4 m = Mat4::Zero();
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const double factor = theta(c, mu) * theta(d, nu);
          if (factor == 0.0) continue;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) m(a, b) += rm.at(a, b, c, d) * factor;
        }
      f.comp[mu][nu] = m;
      f.comp[nu][mu] = -m;
    }
  return f;
}

SkewForm2 Transgression::curvature_from_connection(const Vec4& x) const {
  const double h = fd_step_;
  std::array<SkewForm1, 4> ap, am, ap2, am2;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 step = Vec4::Zero();
    step(mu) = h;
    ap[mu] = connection(x + step);
    am[mu] = connection(x - step);
    ap2[mu] = connection(x + 2 * step);
    am2[mu] = connection(x - 2 * step);
  }
  const SkewForm1 a = connection(x);
  SkewForm2 f;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Mat4 dmu_anu =
          (-ap2[mu].comp[nu] + 8.0 * ap[mu].comp[nu] - 8.0 * am[mu].comp[nu] + am2[mu].comp[nu]) /
          (12.0 * h);
      const Mat4 dnu_amu =
          (-ap2[nu].comp[mu] + 8.0 * ap[nu].comp[mu] - 8.0 * am[nu].comp[mu] + am2[nu].comp[mu]) /
          (12.0 * h);
      const Mat4 m = dmu_anu - dnu_amu + a.comp[mu] * a.comp[nu] - a.comp[nu] * a.comp[mu];
      f.comp[mu][nu] = m;
      f.comp[nu][mu] = -m;
    }
  return f;
}

SkewForm1 Transgression::k_form_unchecked(const Vec4& x) const {
  const Mat4 g = chart_->metric(x);
  SkewForm1 k;
  for (const auto& sc : charts_) {
    const double phi = sc.weight ? sc.weight(x) : 1.0;
    if (phi == 0.0) continue;
    for (const auto& field : sc.fields) {
      const KillingSample ks = field.eval({0, x});
      const Vec4 vflat = g * ks.v;
      const double inv2 = 1.0 / (ks.norm * ks.norm);
      for (int mu = 0; mu < 4; ++mu) k.comp[mu] += phi * inv2 * vflat(mu) * ks.grad;
    }
  }
  return k;
}

SkewForm1 Transgression::k_form(const Vec4& x) const {
  const Mat4 g = chart_->metric(x);
  for (const auto& sc : charts_) {
    std::vector<KillingSample> samples;
    for (const auto& field : sc.fields) samples.push_back(field.eval({0, x}));
    for (const auto& ks : samples)
      if (ks.norm < 1e-8)
        throw NumericDomainError(
            "transgression: polarization failure, Killing field vanishes at sampled point");
    for (std::size_t i = 0; i < samples.size(); ++i)
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        const double ip = samples[i].v.dot(g * samples[j].v);
        if (std::abs(ip) > 1e-6 * samples[i].norm * samples[j].norm)
          throw NumericDomainError(
              "transgression: Killing fields are not mutually orthogonal at sampled point");
      }
  }
  return k_form_unchecked(x);
}

SkewForm2 Transgression::dk_covariant(const Vec4& x) const {
  const double h = fd_step_;
  std::array<SkewForm1, 4> kp, km, kp2, km2;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 step = Vec4::Zero();
    step(mu) = h;
    kp[mu] = k_form_unchecked(x + step);
    km[mu] = k_form_unchecked(x - step);
    kp2[mu] = k_form_unchecked(x + 2 * step);
    km2[mu] = k_form_unchecked(x - 2 * step);
  }
  const SkewForm1 a = connection(x);
  const SkewForm1 k = k_form_unchecked(x);
  SkewForm2 dk;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Mat4 dmu_knu =
          (-kp2[mu].comp[nu] + 8.0 * kp[mu].comp[nu] - 8.0 * km[mu].comp[nu] + km2[mu].comp[nu]) /
          (12.0 * h);
      const Mat4 dnu_kmu =
          (-kp2[nu].comp[mu] + 8.0 * kp[nu].comp[mu] - 8.0 * km[nu].comp[mu] + km2[nu].comp[mu]) /
          (12.0 * h);
      const Mat4 m = dmu_knu - dnu_kmu + a.comp[mu] * k.comp[nu] - k.comp[nu] * a.comp[mu] -
                     (a.comp[nu] * k.comp[mu] - k.comp[mu] * a.comp[nu]);
      dk.comp[mu][nu] = m;
      dk.comp[nu][mu] = -m;
    }
  return dk;
}

SkewForm2 Transgression::f_t(const Vec4& x, double t) const {
  // F_t = F - t DK + t^2 (1/2)[K,K], with (1/2)[K,K](X,Y) = [K(X), K(Y)].
  const SkewForm2 f = curvature(x);
  const SkewForm2 dk = dk_covariant(x);
  const SkewForm1 k = k_form_unchecked(x);
  SkewForm2 ft;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Mat4 m = f.comp[mu][nu] - t * dk.comp[mu][nu] +
                     t * t * (k.comp[mu] * k.comp[nu] - k.comp[nu] * k.comp[mu]);
      ft.comp[mu][nu] = m;
      ft.comp[nu][mu] = -m;
    }
  return ft;
}

SkewForm2 Transgression::modified_curvature(const Vec4& x) const { return f_t(x, 1.0); }

double Transgression::null_contraction_residual(const Vec4& x, const SkewForm2& f) const {
  const KillingSample ks = charts_.front().fields.front().eval({0, x});
  const Vec4 vhat = ks.v / ks.norm;
  double worst = 0.0;
  const Mat4 e = chart_->frame(x);
  for (int b = 0; b < 4; ++b) {
    Mat4 m = Mat4::Zero();
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) m += vhat(mu) * e(nu, b) * f.comp[mu][nu];
    worst = std::max(worst, m.norm());
  }
  return worst;
}

double Transgression::density(const SkewForm2& f, const SkewForm2& g, CharPolynomial p) {
  switch (p) {
    case CharPolynomial::Euler:
      return form_pairing_22(f, g, pair_eps) / (32.0 * kPi * kPi);
    case CharPolynomial::Signature:
      return -form_pairing_22(f, g, pair_tr) / (24.0 * kPi * kPi);
    case CharPolynomial::CombinedDisplayed:
      return form_pairing_22(f, g, pair_eps) - 4.0 * form_pairing_22(f, g, pair_tr);
  }
  return 0.0;
}

namespace {

double density_12(const SkewForm1& k, const SkewForm2& g, int mu, int nu, int rho,
                  CharPolynomial p) {
  switch (p) {
    case CharPolynomial::Euler:
      return form_pairing_12(k, g, mu, nu, rho, pair_eps) / (32.0 * kPi * kPi);
    case CharPolynomial::Signature:
      return -form_pairing_12(k, g, mu, nu, rho, pair_tr) / (24.0 * kPi * kPi);
    case CharPolynomial::CombinedDisplayed:
      return form_pairing_12(k, g, mu, nu, rho, pair_eps) -
             4.0 * form_pairing_12(k, g, mu, nu, rho, pair_tr);
  }
  return 0.0;
}

}  // namespace

Form3 Transgression::transgression_form(const Vec4& x, CharPolynomial p) const {
  // 3-point Gauss-Legendre on [0,1]: exact for the quadratic t-integrand.
  static const double nodes[3] = {0.5 - std::sqrt(0.15), 0.5, 0.5 + std::sqrt(0.15)};
  static const double weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  const SkewForm1 k = k_form(x);
  const SkewForm2 f = curvature(x);
  const SkewForm2 dk = dk_covariant(x);

  Form3 out;
  const int triples[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  for (int q = 0; q < 3; ++q) {
    const double t = nodes[q];
    SkewForm2 ft;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        const Mat4 m = f.comp[mu][nu] - t * dk.comp[mu][nu] +
                       t * t * (k.comp[mu] * k.comp[nu] - k.comp[nu] * k.comp[mu]);
        ft.comp[mu][nu] = m;
        ft.comp[nu][mu] = -m;
      }
    for (int m = 0; m < 4; ++m)
      out.comp[m] += weights[q] * kTransgressionFactor *
                     density_12(k, ft, triples[m][0], triples[m][1], triples[m][2], p);
  }
  return out;
}

Transgression::TransgressionTerms Transgression::transgression_terms(const Vec4& x,
                                                                     CharPolynomial p) const {
  const SkewForm1 k = k_form(x);
  const SkewForm2 f = curvature(x);
  const SkewForm2 dk = dk_covariant(x);
  SkewForm2 kk;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Mat4 m = k.comp[mu] * k.comp[nu] - k.comp[nu] * k.comp[mu];
      kk.comp[mu][nu] = m;
      kk.comp[nu][mu] = -m;
    }
  TransgressionTerms out;
  const int triples[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  for (int m = 0; m < 4; ++m) {
    const int a = triples[m][0], b = triples[m][1], c = triples[m][2];
    out.pkf.comp[m] = kTransgressionFactor * density_12(k, f, a, b, c, p);
    out.pkdk.comp[m] = kTransgressionFactor * density_12(k, dk, a, b, c, p);
    out.pkkk.comp[m] = kTransgressionFactor * density_12(k, kk, a, b, c, p);
    out.total.comp[m] = out.pkf.comp[m] - 0.5 * out.pkdk.comp[m] + out.pkkk.comp[m] / 3.0;
  }
  return out;
}

double Transgression::form3_norm(const Vec4& x, const Form3& w) const {
  const Mat4 e = chart_->frame(x);
  // Full antisymmetric components from the four stored values.
  auto comp = [&w](int mu, int nu, int rho) -> double {
    int axes[3] = {mu, nu, rho};
    int sign = 1;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (axes[i] > axes[j]) {
          std::swap(axes[i], axes[j]);
          sign = -sign;
        }
    if (axes[0] == axes[1] || axes[1] == axes[2]) return 0.0;
    const int omitted = 6 - axes[0] - axes[1] - axes[2];
    return sign * w.comp[omitted];
  };
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = b + 1; c < 4; ++c) {
        double v = 0.0;
        for (int mu = 0; mu < 4; ++mu)
          for (int nu = 0; nu < 4; ++nu)
            for (int rho = 0; rho < 4; ++rho) {
              const double t = comp(mu, nu, rho);
              if (t != 0.0) v += t * e(mu, a) * e(nu, b) * e(rho, c);
            }
        sum += v * v;
      }
  return std::sqrt(6.0 * sum);
}

double Transgression::d_transgression_density(const Vec4& x, CharPolynomial p) const {
  const double h = 4.0 * fd_step_;
  double total = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    Vec4 step = Vec4::Zero();
    step(mu) = h;
    const double dp = (-transgression_form(x + 2 * step, p).comp[mu] +
                       8.0 * transgression_form(x + step, p).comp[mu] -
                       8.0 * transgression_form(x - step, p).comp[mu] +
                       transgression_form(x - 2 * step, p).comp[mu]) /
                      (12.0 * h);
    total += (mu % 2 == 0 ? 1.0 : -1.0) * dp;
  }
  return total;
}

Transgression::StokesResult Transgression::stokes_check(const StokesRegion& region, int n,
                                                        CharPolynomial p) const {
  for (int a = 0; a < 4; ++a)
    if (!(region.hi(a) > region.lo(a)))
      throw NumericDomainError("transgression: degenerate region has no oriented boundary");
  if (n < 2) throw NumericDomainError("transgression: need at least 2 points per axis");

  int counts[4];
  double steps[4];
  for (int a = 0; a < 4; ++a) {
    counts[a] = region.periodic[a] ? 4 : n;
    steps[a] = (region.hi(a) - region.lo(a)) / counts[a];
  }

  StokesResult res;
  // Interior: P(F,F) over the box.
  {
    const double cell = steps[0] * steps[1] * steps[2] * steps[3];
    for (int i0 = 0; i0 < counts[0]; ++i0)
      for (int i1 = 0; i1 < counts[1]; ++i1)
        for (int i2 = 0; i2 < counts[2]; ++i2)
          for (int i3 = 0; i3 < counts[3]; ++i3) {
            const Vec4 x(region.lo(0) + (i0 + 0.5) * steps[0],
                         region.lo(1) + (i1 + 0.5) * steps[1],
                         region.lo(2) + (i2 + 0.5) * steps[2],
                         region.lo(3) + (i3 + 0.5) * steps[3]);
            const SkewForm2 f = curvature(x);
            res.interior += density(f, f, p) * cell;
          }
  }

  // Boundary: TP over the non-periodic faces, outward orientation.
  for (int axis = 0; axis < 4; ++axis) {
    if (region.periodic[axis]) continue;  // opposing faces cancel exactly
    int oa[3], oi = 0;
    for (int a = 0; a < 4; ++a)
      if (a != axis) oa[oi++] = a;
    const double cell3 = steps[oa[0]] * steps[oa[1]] * steps[oa[2]];
    for (int side = 0; side < 2; ++side) {
      const double xa = side ? region.hi(axis) : region.lo(axis);
      const double orient = ((axis % 2 == 0) ? 1.0 : -1.0) * (side ? 1.0 : -1.0);
      for (int i0 = 0; i0 < counts[oa[0]]; ++i0)
        for (int i1 = 0; i1 < counts[oa[1]]; ++i1)
          for (int i2 = 0; i2 < counts[oa[2]]; ++i2) {
            Vec4 x;
            x(axis) = xa;
            x(oa[0]) = region.lo(oa[0]) + (i0 + 0.5) * steps[oa[0]];
            x(oa[1]) = region.lo(oa[1]) + (i1 + 0.5) * steps[oa[1]];
            x(oa[2]) = region.lo(oa[2]) + (i2 + 0.5) * steps[oa[2]];
            res.boundary += orient * transgression_form(x, p).comp[axis] * cell3;
          }
    }
  }

  res.residual = std::abs(res.interior + res.boundary);
  return res;
}

}  // namespace curv4
