#pragma once

// Region partitions of the boundary driven by the shadow geometry, the
// frequency-dependent change of variables on transition intervals, and the
// oscillation-weighted Galerkin approximation spaces built on top of them.
//
// Two partition modes exist:
//  * cov: 6 or 8 regions (J = 6 merges the illuminated / deep-shadow regions
//    into their neighbours); transition intervals carry a diffeomorphism
//    phi(s) = t +- varphi(s) k^{psi(s)} with affine varphi and linear psi
//    running from -1/3 (shadow-boundary end) to 0 (far end).
//  * freq_adapted: 4m regions; each transition zone is split into m-1
//    subintervals with endpoints t +- c k^{-1/3 + eps_j}; no mapping.

#include "hfbem/geometry.hpp"

#include <complex>
#include <memory>
#include <optional>
#include <vector>

namespace hfbem {

using cplx = std::complex<double>;

enum class RegionTag { IT1, IT2, ST1, ST2, SB1, SB2, IL, DS };

const char *region_tag_name(RegionTag tag);

enum class PartitionMode { cov, freq_adapted };

// The eight partition parameters (arc-length units).  Primed values bound
// the outer transition ends; unprimed scale the k^{-1/3} boundary layers.
struct CovParams {
    double xi1 = 0.0, xi2 = 0.0;
    double xi1p = 0.0, xi2p = 0.0;
    double zeta1 = 0.0, zeta2 = 0.0;
    double zeta1p = 0.0, zeta2p = 0.0;
};

// phi(s) = t_anchor + sign * varphi(s) * k^{psi(s)} on [a, b], fixing both
// endpoints and strictly increasing in between.
class ChangeOfVariables {
  public:
    ChangeOfVariables(double a, double b, double t_anchor, double sign,
                      double varphi_a, double varphi_b, double psi_a,
                      double psi_b, double k);

    double a() const { return a_; }
    double b() const { return b_; }
    double k() const { return k_; }
    double psi(double s) const;      // linear in s; exactly psi_a / psi_b at ends
    double varphi(double s) const;   // affine in s
    double forward(double s) const;  // phi(s); domain error outside [a, b]
    double inverse(double y) const;  // phi^{-1}(y) within 1e-11; exact at ends
    double derivative(double s) const; // phi'(s) > 0

    // C1 affine continuation of phi beyond [a, b] (used by the overlapping
    // trigonometric bases whose supports extend past the interval).
    double forward_extended(double s) const;
    double inverse_extended(double y) const;

  private:
    double a_, b_, t_anchor_, sign_;
    double varphi_a_, varphi_b_, psi_a_, psi_b_, k_;
};

struct Interval {
    double a = 0.0;
    double b = 0.0;
    RegionTag tag = RegionTag::IL;
    int sub = 0;   // 1-based subinterval index in freq_adapted transitions
    bool mapped = false;
    std::optional<ChangeOfVariables> cov;

    double width() const { return b - a; }
};

class RegionPartition {
  public:
    // See build_cov_partition / build_freq_adapted_partition.
    RegionPartition(std::vector<Interval> intervals, PartitionMode mode, int J,
                    int m, std::vector<double> eps, CovParams params, double k,
                    double L, double t1, double t2);

    const std::vector<Interval> &intervals() const { return intervals_; }
    PartitionMode mode() const { return mode_; }
    int J() const { return J_; }
    int m() const { return m_; }
    const std::vector<double> &eps() const { return eps_; }
    const CovParams &params() const { return params_; }
    double k() const { return k_; }
    double L() const { return L_; }
    double t1() const { return t1_; }
    double t2() const { return t2_; }

    // Index (into intervals()) of the interval containing s, with half-open
    // [a, b) cyclic semantics.
    int locate(double s) const;

    // Interval indices sorted in cyclic position order, starting from SB1's
    // left edge; consecutive intervals share endpoints.
    const std::vector<int> &cyclic_order() const { return cyclic_; }
    // Cyclic slot of a layout-order interval index.
    int cyclic_position(int interval) const;
    // Left edge of SB1, the origin of the canonical cyclic coordinate.
    double origin() const { return origin_; }
    // Edge offsets from origin() in cyclic order; keys[0] = 0, keys[n] = L.
    const std::vector<double> &cyclic_keys() const { return keys_; }

  private:
    std::vector<Interval> intervals_;
    PartitionMode mode_;
    int J_, m_;
    std::vector<double> eps_;
    CovParams params_;
    double k_, L_, t1_, t2_;
    std::vector<int> cyclic_;
    std::vector<int> cyclic_pos_;
    double origin_ = 0.0;
    std::vector<double> keys_;
};

// The 6- or 8-region layout with mapped transition intervals.  Interval
// order: IT1, IT2, ST1, ST2, SB1, SB2 [, IL, DS].  Requires k > 1, all
// parameters positive, the scaled bounds xi * k^{-1/3} < xi' (likewise for
// zeta) so every transition interval has positive width at this k, and the
// ordering chains
//   (A)  t1 + xi1' <= t2 - xi2'      (B)  t2 + zeta2' <= L + t1 - zeta1'
// with equality in both exactly when J = 6.  Parameters whose transition
// map would lose monotonicity are rejected as well.  Violations throw
// std::invalid_argument naming the failed condition.
RegionPartition build_cov_partition(const ScatteringConfig &config,
                                    const CovParams &params, int J);

// Default exponent schedule eps_j = (1/3)(2m - 2j + 1)/(2m + 1), j = 1..m.
std::vector<double> freq_adapted_eps_schedule(int m);

// The 4m-region layout: per transition zone m-1 subintervals IT1^j etc.
// (j = 1 outermost), then SB1, SB2, IL, DS.  An empty eps selects the
// default schedule; otherwise eps must satisfy 0 <= eps_m < .. < eps_1 < 1/3.
// Only xi1, xi2, zeta1, zeta2 of params are used.
RegionPartition build_freq_adapted_partition(const ScatteringConfig &config,
                                             const CovParams &params, int m,
                                             std::vector<double> eps = {});

// Smooth compactly supported weights over the partition intervals (layout
// order), summing to 1 everywhere.  Each weight lives on its interval
// extended by `overlap` on both sides; steepness shapes the mollifier ramp.
// Requires 0 < overlap < half the narrowest interval width.
std::vector<double> partition_of_unity(const RegionPartition &partition,
                                       double overlap, double s,
                                       double steepness = 1.0);

enum class BasisFamily { algebraic, trigonometric };

// Mollifier controls for the overlapping (trigonometric) mode.  overlap < 0
// selects min(0.25 * narrowest width, k^{-1/3}).
struct PouOptions {
    double overlap = -1.0;
    double steepness = 1.0;
};

// Oscillation-weighted approximation space over a partition: per interval a
// polynomial or trigonometric factor (composed with phi^{-1} on mapped
// intervals), times the plane-wave weight e^{ik alpha . gamma(s)}.
// Algebraic spaces use sharp characteristic supports; trigonometric spaces
// overlap and carry the partition-of-unity factor inside the basis.
class GalerkinSpace {
  public:
    GalerkinSpace(RegionPartition partition, BasisFamily family,
                  std::vector<int> degrees,
                  std::shared_ptr<const BoundaryCurve> curve, Vec2 alpha,
                  PouOptions pou = {});

    const RegionPartition &partition() const { return partition_; }
    BasisFamily family() const { return family_; }
    const std::vector<int> &degrees() const { return degrees_; }
    bool overlapping() const { return family_ == BasisFamily::trigonometric; }
    double pou_overlap() const { return overlap_; }
    double pou_steepness() const { return pou_.steepness; }
    const std::shared_ptr<const BoundaryCurve> &curve() const { return curve_; }
    const Vec2 &alpha() const { return alpha_; }
    double k() const { return partition_.k(); }

    int dimension() const { return dim_; }
    int interval_count() const {
        return static_cast<int>(partition_.intervals().size());
    }
    // Global index of local basis function `local` on interval j; local runs
    // 0..d_j (algebraic) or 0..d_j standing for r = local - d_j/2 (trig).
    int global_index(int j, int local) const;

    // Value of basis function (j, r) at arc length s. r is the algebraic
    // power 0..d_j, or the signed trigonometric index -d_j/2..d_j/2.
    // Returns 0 outside the (overlap-extended) support.
    cplx basis_eval(int j, int r, double s) const;

    // All dimension() basis values at s at once (out must hold dimension()
    // entries); shares the per-interval work across the local functions.
    void basis_row(double s, cplx *out) const;

    // Expansion value sum_g coeffs[g] b_g(s).
    cplx expand(const Eigen::VectorXcd &coeffs, double s) const;

    // Support of basis functions on interval j, including overlap extension.
    std::pair<double, double> support(int j) const;

    // The plane-wave weight e^{ik alpha . gamma(s)}.
    cplx weight(double s) const;

    // chi_j(s) of the partition of unity (1 inside interval j away from the
    // edges); only meaningful in overlapping mode.
    double pou_weight(int j, double s) const;

  private:
    double alg_rho(int j, double s) const;  // [-1, 1] coordinate, mapped back
    double trig_rho(int j, double s) const; // [0, 2pi] angle over the support

    RegionPartition partition_;
    BasisFamily family_;
    std::vector<int> degrees_;
    std::shared_ptr<const BoundaryCurve> curve_;
    Vec2 alpha_;
    PouOptions pou_;
    double overlap_ = 0.0;
    int dim_ = 0;
    std::vector<int> offsets_;
};

// Free-function forms of the member operations.
double cov_forward(const ChangeOfVariables &cov, double s);
double cov_inverse(const ChangeOfVariables &cov, double y);
cplx basis_eval(const GalerkinSpace &space, int interval, int index, double s);

} // namespace hfbem
