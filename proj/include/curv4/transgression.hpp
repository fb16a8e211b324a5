#pragma once

#include <array>
#include <functional>
#include <vector>

#include "curv4/models.hpp"
#include "curv4/tensor4.hpp"

namespace curv4 {

/// so(4)-valued 1-form: comp[mu] is the frame matrix paired with dx^mu.
struct SkewForm1 {
  std::array<Mat4, 4> comp{Mat4::Zero(), Mat4::Zero(), Mat4::Zero(), Mat4::Zero()};
};

/// so(4)-valued 2-form, antisymmetric in the coordinate slots.
struct SkewForm2 {
  Mat4 comp[4][4];
  SkewForm2() {
    for (auto& row : comp)
      for (auto& m : row) m.setZero();
  }
};

/// Scalar 3-form: comp[m] is the value on the ascending coordinate triple
/// omitting axis m.
struct Form3 {
  std::array<double, 4> comp{0, 0, 0, 0};
};

enum class CharPolynomial { Euler, Signature, CombinedDisplayed };

/// A structure chart: Killing fields with a blending weight (defaults to 1).
struct StructureChart {
  std::vector<KillingField> fields;
  std::function<double(const Vec4&)> weight;
};

/// Frame-bundle geometry of a model chart plus the Killing-field
/// modification: connection and curvature forms, the K 1-form, the modified
/// curvature, transgression 3-forms and their Stokes pairing.
///
/// Coordinate slots carry the form indices; values live in the orthonormal
/// frame, which is invariant under the supplied Killing fields on catalog
/// models (diagonal charts with field-independent coefficients).
class Transgression {
 public:
  /// Uses the model's own Killing fields as a single unweighted chart.
  explicit Transgression(const ModelManifold& model);
  Transgression(const ModelManifold& model, std::vector<StructureChart> charts);

  const ModelManifold& model() const { return *model_; }

  /// Connection 1-form A of the orthonormal frame.
  SkewForm1 connection(const Vec4& x) const;
  /// Curvature 2-form from the model's curvature tensor.
  SkewForm2 curvature(const Vec4& x) const;
  /// Curvature recomputed as dA + (1/2)[A, A]; test oracle for `curvature`.
  SkewForm2 curvature_from_connection(const Vec4& x) const;

  /// K = sum_l phi_l sum_i |v_i|^-2 (v_i)_flat nabla v_i.  Throws when the
  /// fields are not mutually orthogonal at x or a field degenerates.
  SkewForm1 k_form(const Vec4& x) const;
  /// Covariant exterior derivative DK = dK + [A, K].
  SkewForm2 dk_covariant(const Vec4& x) const;
  /// Modified curvature F~ = F - DK + (1/2)[K, K].
  SkewForm2 modified_curvature(const Vec4& x) const;

  /// max_nu |(i_v F)(., nu)|_F over frame-normalized slots, for the first
  /// Killing field of the first chart (the common null direction).
  double null_contraction_residual(const Vec4& x, const SkewForm2& f) const;

  /// 4-form density (coefficient of dx^0123) of P(F, G).
  static double density(const SkewForm2& f, const SkewForm2& g, CharPolynomial p);

  /// Transgression 3-form TP1 with P(F,F) + d TP1 = 0; the t-integral is
  /// evaluated with 3-point Gauss quadrature (exact: the integrand is
  /// quadratic in t).
  Form3 transgression_form(const Vec4& x, CharPolynomial p) const;

  /// Term-by-term decomposition of the t-integral: TP1 splits into the
  /// P(K,F), P(K,DK) and P(K,[K,K]) contributions with exact t-weights
  /// 1, -1/2 and 1/3.  Reported separately as a cross-check of the
  /// quadrature and of the DK expansion term.
  struct TransgressionTerms {
    Form3 total;
    Form3 pkf;   // -2 P(K, F)
    Form3 pkdk;  // -2 P(K, DK); enters total with weight -1/2
    Form3 pkkk;  // -2 P(K, [K,K]/2 * 2); enters total with weight 1/3
  };
  TransgressionTerms transgression_terms(const Vec4& x, CharPolynomial p) const;

  /// Tensor norm of a 3-form at x (frame components).
  double form3_norm(const Vec4& x, const Form3& w) const;

  /// d of the transgression form by finite differences; pointwise oracle for
  /// the defining identity.
  double d_transgression_density(const Vec4& x, CharPolynomial p) const;

  struct StokesRegion {
    Vec4 lo = Vec4::Zero();
    Vec4 hi = Vec4::Zero();
    std::array<bool, 4> periodic{false, false, false, false};
  };
  struct StokesResult {
    double interior = 0.0;  // integral of P(F,F) over the box
    double boundary = 0.0;  // integral of TP over the oriented boundary
    double residual = 0.0;  // |interior + boundary|
  };
  /// Midpoint quadrature with n points per non-periodic axis (4 on periodic
  /// axes, where opposing faces cancel exactly).
  StokesResult stokes_check(const StokesRegion& region, int n, CharPolynomial p) const;

  double fd_step() const { return fd_step_; }
  void set_fd_step(double h) { fd_step_ = h; }

 private:
  SkewForm1 k_form_unchecked(const Vec4& x) const;
  SkewForm2 f_t(const Vec4& x, double t) const;

  const ModelManifold* model_;
  const MetricChart* chart_;
  std::vector<StructureChart> charts_;
  double fd_step_ = 2e-3;
};

}  // namespace curv4
