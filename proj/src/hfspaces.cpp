#include "hfbem/hfspaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hfbem {

namespace {

constexpr double kThird = 1.0 / 3.0;
constexpr double kPi = 3.14159265358979323846;

double positive_fmod(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) {
        r += period;
    }
    return r;
}

// exp(-1/x^q) mollifier blend; exactly 0 at x <= 0, 1 at x >= 1, 1/2 at 1/2.
double smooth_step(double x, double q) {
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    const double ea = std::exp(-1.0 / std::pow(x, q));
    const double eb = std::exp(-1.0 / std::pow(1.0 - x, q));
    return ea / (ea + eb);
}

// chi of cyclic slot i at canonical coordinate u0 in [0, L).  keys has n+1
// entries with keys[0] = 0 and keys[n] = L exactly; the key-minus-shift
// pre-subtraction keeps the two slots adjacent to an edge (including the
// wrap seam, where L - L = 0) evaluating bit-identical step arguments, so
// the weights sum to 1 to machine precision.
double pou_chi_slot(const std::vector<double> &keys, double L, int i,
                    double u0, double ov, double q) {
    double chi = 0.0;
    for (const double shift : {-L, 0.0, L}) {
        const double lo = keys[i] - shift;
        const double hi = keys[i + 1] - shift;
        if (u0 < lo - ov || u0 > hi + ov) {
            continue;
        }
        const double up = smooth_step((u0 - lo + ov) / (2.0 * ov), q);
        const double dn = smooth_step((u0 - hi + ov) / (2.0 * ov), q);
        chi += up * (1.0 - dn);
    }
    return chi;
}

[[noreturn]] void fail_chain(const std::string &what) {
    throw std::invalid_argument("infeasible partition: requires " + what);
}

void require_positive(double v, const char *name) {
    if (!(v > 0.0)) {
        throw std::invalid_argument(std::string("partition parameter ") +
                                    name + " must be positive");
    }
}

} // namespace

const char *region_tag_name(RegionTag tag) {
    switch (tag) {
    case RegionTag::IT1:
        return "IT1";
    case RegionTag::IT2:
        return "IT2";
    case RegionTag::ST1:
        return "ST1";
    case RegionTag::ST2:
        return "ST2";
    case RegionTag::SB1:
        return "SB1";
    case RegionTag::SB2:
        return "SB2";
    case RegionTag::IL:
        return "IL";
    case RegionTag::DS:
        return "DS";
    }
    return "?";
}

ChangeOfVariables::ChangeOfVariables(double a, double b, double t_anchor,
                                     double sign, double varphi_a,
                                     double varphi_b, double psi_a,
                                     double psi_b, double k)
    : a_(a), b_(b), t_anchor_(t_anchor), sign_(sign), varphi_a_(varphi_a),
      varphi_b_(varphi_b), psi_a_(psi_a), psi_b_(psi_b), k_(k) {
    if (!(a < b)) {
        throw std::invalid_argument("change of variables needs a < b");
    }
    if (!(k > 1.0)) {
        throw std::invalid_argument("change of variables needs k > 1");
    }
    if (!(varphi_a > 0.0) || !(varphi_b > 0.0)) {
        throw std::invalid_argument("change of variables needs varphi > 0");
    }
    // phi' = sign k^psi (varphi' + varphi psi' ln k); the bracket is linear
    // in s, so positivity on all of [a, b] follows from the endpoints
    if (!(derivative(a_) > 0.0) || !(derivative(b_) > 0.0)) {
        throw std::invalid_argument(
            "change of variables is not monotone for these parameters");
    }
}

double ChangeOfVariables::psi(double s) const {
    return psi_a_ + (psi_b_ - psi_a_) * ((s - a_) / (b_ - a_));
}

double ChangeOfVariables::varphi(double s) const {
    return varphi_a_ + (varphi_b_ - varphi_a_) * ((s - a_) / (b_ - a_));
}

double ChangeOfVariables::forward(double s) const {
    const double slop = 1e-9 * (b_ - a_);
    if (s < a_ - slop || s > b_ + slop) {
        throw std::domain_error(
            "change of variables evaluated outside its interval");
    }
    s = std::clamp(s, a_, b_);
    return t_anchor_ + sign_ * varphi(s) * std::pow(k_, psi(s));
}

double ChangeOfVariables::derivative(double s) const {
    s = std::clamp(s, a_, b_);
    const double w = b_ - a_;
    const double dvarphi = (varphi_b_ - varphi_a_) / w;
    const double dpsi = (psi_b_ - psi_a_) / w;
    return sign_ * std::pow(k_, psi(s)) *
           (dvarphi + varphi(s) * dpsi * std::log(k_));
}

double ChangeOfVariables::inverse(double y) const {
    const double slop = 1e-9 * (b_ - a_);
    if (y < a_ - slop || y > b_ + slop) {
        throw std::domain_error(
            "change of variables inverse evaluated outside its interval");
    }
    const double fa = forward(a_);
    const double fb = forward(b_);
    if (y <= fa) {
        return a_;
    }
    if (y >= fb) {
        return b_;
    }
    double lo = a_;
    double hi = b_;
    double s = std::clamp(y, lo, hi);
    const double tol = 1e-13 * (1.0 + std::abs(y));
    for (int it = 0; it < 80; ++it) {
        const double f = forward(s) - y;
        if (std::abs(f) <= tol) {
            break;
        }
        if (f > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        double cand = s - f / derivative(s);
        if (!(cand > lo) || !(cand < hi)) {
            cand = 0.5 * (lo + hi);
        }
        if (cand == s) {
            break;
        }
        s = cand;
    }
    return s;
}

double ChangeOfVariables::forward_extended(double s) const {
    if (s < a_) {
        return forward(a_) + derivative(a_) * (s - a_);
    }
    if (s > b_) {
        return forward(b_) + derivative(b_) * (s - b_);
    }
    return forward(s);
}

double ChangeOfVariables::inverse_extended(double y) const {
    const double fa = forward(a_);
    const double fb = forward(b_);
    if (y < fa) {
        return a_ + (y - fa) / derivative(a_);
    }
    if (y > fb) {
        return b_ + (y - fb) / derivative(b_);
    }
    return inverse(y);
}

RegionPartition::RegionPartition(std::vector<Interval> intervals,
                                 PartitionMode mode, int J, int m,
                                 std::vector<double> eps, CovParams params,
                                 double k, double L, double t1, double t2)
    : intervals_(std::move(intervals)), mode_(mode), J_(J), m_(m),
      eps_(std::move(eps)), params_(params), k_(k), L_(L), t1_(t1), t2_(t2) {
    const int n = static_cast<int>(intervals_.size());
    if (n < 2) {
        throw std::invalid_argument("partition needs at least two intervals");
    }
    double wsum = 0.0;
    for (const Interval &I : intervals_) {
        if (!(I.width() > 0.0)) {
            std::ostringstream os;
            os << "infeasible partition: empty interval "
               << region_tag_name(I.tag);
            throw std::invalid_argument(os.str());
        }
        wsum += I.width();
    }
    if (std::abs(wsum - L_) > 1e-9 * L_) {
        throw std::invalid_argument("partition does not tile the boundary");
    }
    int sb1 = -1;
    for (int i = 0; i < n; ++i) {
        if (intervals_[i].tag == RegionTag::SB1) {
            sb1 = i;
        }
    }
    if (sb1 < 0) {
        throw std::invalid_argument("partition lacks an SB1 interval");
    }
    origin_ = intervals_[sb1].a;
    std::vector<double> key(n);
    for (int i = 0; i < n; ++i) {
        key[i] = (i == sb1) ? 0.0 : positive_fmod(intervals_[i].a - origin_, L_);
    }
    cyclic_.resize(n);
    std::iota(cyclic_.begin(), cyclic_.end(), 0);
    std::sort(cyclic_.begin(), cyclic_.end(),
              [&](int x, int y) { return key[x] < key[y]; });
    keys_.assign(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        if (std::abs(keys_[i] - key[cyclic_[i]]) > 1e-9 * L_) {
            throw std::invalid_argument("partition does not tile the boundary");
        }
        keys_[i + 1] = keys_[i] + intervals_[cyclic_[i]].width();
    }
    if (std::abs(keys_[n] - L_) > 1e-9 * L_) {
        throw std::invalid_argument("partition does not tile the boundary");
    }
    keys_[n] = L_;
    cyclic_pos_.resize(n);
    for (int i = 0; i < n; ++i) {
        cyclic_pos_[cyclic_[i]] = i;
    }
}

int RegionPartition::cyclic_position(int interval) const {
    return cyclic_pos_.at(static_cast<size_t>(interval));
}

int RegionPartition::locate(double s) const {
    const double u0 = positive_fmod(s - origin_, L_);
    int idx = static_cast<int>(std::upper_bound(keys_.begin(), keys_.end(), u0) -
                               keys_.begin()) -
              1;
    idx = std::clamp(idx, 0, static_cast<int>(cyclic_.size()) - 1);
    return cyclic_[idx];
}

RegionPartition build_cov_partition(const ScatteringConfig &config,
                                    const CovParams &p, int J) {
    if (J != 6 && J != 8) {
        throw std::invalid_argument("J must be 6 or 8");
    }
    const double k = config.k;
    if (!(k > 1.0)) {
        throw std::invalid_argument("cov partition requires k > 1");
    }
    const double L = config.curve->length();
    const double t1 = config.t1;
    const double t2 = config.t2;

    require_positive(p.xi1, "xi1");
    require_positive(p.xi2, "xi2");
    require_positive(p.xi1p, "xi1'");
    require_positive(p.xi2p, "xi2'");
    require_positive(p.zeta1, "zeta1");
    require_positive(p.zeta2, "zeta2");
    require_positive(p.zeta1p, "zeta1'");
    require_positive(p.zeta2p, "zeta2'");

    const double gapA = (t2 - p.xi2p) - (t1 + p.xi1p);
    const double gapB = (L + t1 - p.zeta1p) - (t2 + p.zeta2p);
    const double tol = 1e-9 * L;
    double xi1p_eff = p.xi1p;
    double xi2p_eff = p.xi2p;
    double zeta1p_eff = p.zeta1p;
    double zeta2p_eff = p.zeta2p;
    if (J == 6) {
        if (std::abs(gapA) > tol) {
            fail_chain("t1 + xi1' = t2 - xi2' when J = 6");
        }
        if (std::abs(gapB) > tol) {
            fail_chain("t2 + zeta2' = L + t1 - zeta1' when J = 6");
        }
        // shared edges: reconcile roundoff so the intervals tile exactly
        const double eA = 0.5 * ((t1 + p.xi1p) + (t2 - p.xi2p));
        const double eB = 0.5 * ((t2 + p.zeta2p) + (L + t1 - p.zeta1p));
        xi1p_eff = eA - t1;
        xi2p_eff = t2 - eA;
        zeta2p_eff = eB - t2;
        zeta1p_eff = L + t1 - eB;
    } else {
        if (!(gapA > tol)) {
            fail_chain("t1 + xi1' < t2 - xi2'");
        }
        if (!(gapB > tol)) {
            fail_chain("t2 + zeta2' < L + t1 - zeta1'");
        }
    }

    // the unprimed parameters enter scaled by k^{-1/3}, so the chains only
    // have to hold at that scale for the wavenumber at hand
    const double km = std::pow(k, -kThird);
    if (!(p.xi1 * km < xi1p_eff)) {
        fail_chain("xi1 k^{-1/3} < xi1'");
    }
    if (!(p.xi2 * km < xi2p_eff)) {
        fail_chain("xi2 k^{-1/3} < xi2'");
    }
    if (!(p.zeta1 * km < zeta1p_eff)) {
        fail_chain("zeta1 k^{-1/3} < zeta1'");
    }
    if (!(p.zeta2 * km < zeta2p_eff)) {
        fail_chain("zeta2 k^{-1/3} < zeta2'");
    }

    const double aIT1 = t1 + p.xi1 * km, bIT1 = t1 + xi1p_eff;
    const double aIT2 = t2 - xi2p_eff, bIT2 = t2 - p.xi2 * km;
    const double aST1 = t1 - zeta1p_eff, bST1 = t1 - p.zeta1 * km;
    const double aST2 = t2 + p.zeta2 * km, bST2 = t2 + zeta2p_eff;

    std::vector<Interval> iv;
    auto add_mapped = [&](double a, double b, RegionTag tag, double anchor,
                          double sgn, double va, double vb, double pa,
                          double pb) {
        Interval I;
        I.a = a;
        I.b = b;
        I.tag = tag;
        I.mapped = true;
        I.cov.emplace(a, b, anchor, sgn, va, vb, pa, pb, k);
        iv.push_back(std::move(I));
    };
    auto add_plain = [&](double a, double b, RegionTag tag) {
        Interval I;
        I.a = a;
        I.b = b;
        I.tag = tag;
        iv.push_back(I);
    };

    add_mapped(aIT1, bIT1, RegionTag::IT1, t1, +1.0, p.xi1, xi1p_eff, -kThird,
               0.0);
    add_mapped(aIT2, bIT2, RegionTag::IT2, t2, -1.0, xi2p_eff, p.xi2, 0.0,
               -kThird);
    add_mapped(aST1, bST1, RegionTag::ST1, t1, -1.0, zeta1p_eff, p.zeta1, 0.0,
               -kThird);
    add_mapped(aST2, bST2, RegionTag::ST2, t2, +1.0, p.zeta2, zeta2p_eff,
               -kThird, 0.0);
    add_plain(bST1, aIT1, RegionTag::SB1);
    add_plain(bIT2, aST2, RegionTag::SB2);
    if (J == 8) {
        add_plain(bIT1, aIT2, RegionTag::IL);
        add_plain(bST2, L + aST1, RegionTag::DS);
    }
    return RegionPartition(std::move(iv), PartitionMode::cov, J, 0, {}, p, k,
                           L, t1, t2);
}

std::vector<double> freq_adapted_eps_schedule(int m) {
    if (m < 1) {
        throw std::invalid_argument("m must be >= 1");
    }
    std::vector<double> eps(m);
    for (int j = 1; j <= m; ++j) {
        eps[j - 1] = kThird * (2.0 * m - 2.0 * j + 1.0) / (2.0 * m + 1.0);
    }
    return eps;
}

RegionPartition build_freq_adapted_partition(const ScatteringConfig &config,
                                             const CovParams &p, int m,
                                             std::vector<double> eps) {
    if (m < 1) {
        throw std::invalid_argument("m must be >= 1");
    }
    const double k = config.k;
    if (!(k > 1.0)) {
        throw std::invalid_argument(
            "frequency-adapted partition requires k > 1");
    }
    const double L = config.curve->length();
    const double t1 = config.t1;
    const double t2 = config.t2;
    require_positive(p.xi1, "xi1");
    require_positive(p.xi2, "xi2");
    require_positive(p.zeta1, "zeta1");
    require_positive(p.zeta2, "zeta2");
    if (eps.empty()) {
        eps = freq_adapted_eps_schedule(m);
    }
    if (static_cast<int>(eps.size()) != m) {
        throw std::invalid_argument("eps schedule must have m entries");
    }
    for (int j = 0; j < m; ++j) {
        if (eps[j] < 0.0 || !(eps[j] < kThird)) {
            throw std::invalid_argument("eps values must lie in [0, 1/3)");
        }
        if (j + 1 < m && !(eps[j] > eps[j + 1])) {
            throw std::invalid_argument("eps schedule must decrease strictly");
        }
    }
    if (!(t1 + p.xi1 < t2 - p.xi2)) {
        fail_chain("t1 + xi1 < t2 - xi2");
    }
    if (!(t2 + p.zeta2 < L + t1 - p.zeta1)) {
        fail_chain("t2 + zeta2 < L + t1 - zeta1");
    }

    auto pw = [&](double e) { return std::pow(k, -kThird + e); };
    std::vector<Interval> iv;
    auto add = [&](double a, double b, RegionTag tag, int sub) {
        Interval I;
        I.a = a;
        I.b = b;
        I.tag = tag;
        I.sub = sub;
        iv.push_back(I);
    };
    for (int j = 1; j <= m - 1; ++j) {
        add(t1 + p.xi1 * pw(eps[j]), t1 + p.xi1 * pw(eps[j - 1]),
            RegionTag::IT1, j);
    }
    for (int j = 1; j <= m - 1; ++j) {
        add(t2 - p.xi2 * pw(eps[j - 1]), t2 - p.xi2 * pw(eps[j]),
            RegionTag::IT2, j);
    }
    for (int j = 1; j <= m - 1; ++j) {
        add(t1 - p.zeta1 * pw(eps[j - 1]), t1 - p.zeta1 * pw(eps[j]),
            RegionTag::ST1, j);
    }
    for (int j = 1; j <= m - 1; ++j) {
        add(t2 + p.zeta2 * pw(eps[j]), t2 + p.zeta2 * pw(eps[j - 1]),
            RegionTag::ST2, j);
    }
    add(t1 - p.zeta1 * pw(eps[m - 1]), t1 + p.xi1 * pw(eps[m - 1]),
        RegionTag::SB1, 0);
    add(t2 - p.xi2 * pw(eps[m - 1]), t2 + p.zeta2 * pw(eps[m - 1]),
        RegionTag::SB2, 0);
    add(t1 + p.xi1 * pw(eps[0]), t2 - p.xi2 * pw(eps[0]), RegionTag::IL, 0);
    add(t2 + p.zeta2 * pw(eps[0]), L + t1 - p.zeta1 * pw(eps[0]),
        RegionTag::DS, 0);
    return RegionPartition(std::move(iv), PartitionMode::freq_adapted, 0, m,
                           std::move(eps), p, k, L, t1, t2);
}

std::vector<double> partition_of_unity(const RegionPartition &partition,
                                       double overlap, double s,
                                       double steepness) {
    const auto &iv = partition.intervals();
    const int n = static_cast<int>(iv.size());
    double wmin = iv[0].width();
    for (const Interval &I : iv) {
        wmin = std::min(wmin, I.width());
    }
    if (!(overlap > 0.0)) {
        throw std::invalid_argument("overlap width must be positive");
    }
    if (!(overlap < 0.5 * wmin)) {
        throw std::invalid_argument(
            "overlap width exceeds half the narrowest interval");
    }
    if (!(steepness > 0.0)) {
        throw std::invalid_argument("steepness must be positive");
    }
    const auto &keys = partition.cyclic_keys();
    const auto &order = partition.cyclic_order();
    const double L = partition.L();
    const double u0 = positive_fmod(s - partition.origin(), L);
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i) {
        w[order[i]] = pou_chi_slot(keys, L, i, u0, overlap, steepness);
    }
    return w;
}

GalerkinSpace::GalerkinSpace(RegionPartition partition, BasisFamily family,
                             std::vector<int> degrees,
                             std::shared_ptr<const BoundaryCurve> curve,
                             Vec2 alpha, PouOptions pou)
    : partition_(std::move(partition)), family_(family),
      degrees_(std::move(degrees)), curve_(std::move(curve)), alpha_(alpha),
      pou_(pou) {
    const auto &iv = partition_.intervals();
    const int n = static_cast<int>(iv.size());
    if (static_cast<int>(degrees_.size()) != n) {
        throw std::invalid_argument(
            "degrees list must match the interval count");
    }
    if (!curve_) {
        throw std::invalid_argument("space needs a boundary curve");
    }
    offsets_.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) {
        if (degrees_[j] < 0) {
            throw std::invalid_argument("degrees must be nonnegative");
        }
        if (family_ == BasisFamily::trigonometric && degrees_[j] % 2 != 0) {
            throw std::invalid_argument("trigonometric degrees must be even");
        }
        offsets_[j + 1] = offsets_[j] + degrees_[j] + 1;
    }
    dim_ = offsets_[n];
    if (family_ == BasisFamily::trigonometric) {
        double wmin = iv[0].width();
        for (const Interval &I : iv) {
            wmin = std::min(wmin, I.width());
        }
        overlap_ = pou_.overlap > 0.0
                       ? pou_.overlap
                       : std::min(0.25 * wmin,
                                  std::pow(partition_.k(), -kThird));
        if (!(overlap_ < 0.5 * wmin)) {
            throw std::invalid_argument(
                "overlap width exceeds half the narrowest interval");
        }
        if (!(pou_.steepness > 0.0)) {
            throw std::invalid_argument("steepness must be positive");
        }
    }
}

int GalerkinSpace::global_index(int j, int local) const {
    if (j < 0 || j >= interval_count()) {
        throw std::invalid_argument("interval index out of range");
    }
    if (local < 0 || local > degrees_[j]) {
        throw std::invalid_argument("basis index out of range");
    }
    return offsets_[j] + local;
}

cplx GalerkinSpace::weight(double s) const {
    const Vec2 x = curve_->gamma(s);
    const double ph = partition_.k() * alpha_.dot(x);
    return {std::cos(ph), std::sin(ph)};
}

double GalerkinSpace::pou_weight(int j, double s) const {
    if (j < 0 || j >= interval_count()) {
        throw std::invalid_argument("interval index out of range");
    }
    if (family_ == BasisFamily::algebraic) {
        return partition_.locate(s) == j ? 1.0 : 0.0;
    }
    const int slot = partition_.cyclic_position(j);
    const double u0 = positive_fmod(s - partition_.origin(), partition_.L());
    return pou_chi_slot(partition_.cyclic_keys(), partition_.L(), slot, u0,
                        overlap_, pou_.steepness);
}

std::pair<double, double> GalerkinSpace::support(int j) const {
    if (j < 0 || j >= interval_count()) {
        throw std::invalid_argument("interval index out of range");
    }
    const Interval &I = partition_.intervals()[j];
    return {I.a - overlap_, I.b + overlap_};
}

// Cyclic unwrap of s relative to [lo, hi]: points an ulp below lo must not
// come back a full period high.  Off-interval points clamp to the nearer
// edge (callers gate on membership first, so only edge roundoff arrives).
static double unwrap_into(double s, double lo, double hi, double L) {
    double off = positive_fmod(s - lo, L);
    const double width = hi - lo;
    if (off > width && off > 0.5 * (L + width)) {
        off -= L;
    }
    return std::clamp(lo + off, lo, hi);
}

double GalerkinSpace::alg_rho(int j, double s) const {
    const Interval &I = partition_.intervals()[j];
    const double u = unwrap_into(s, I.a, I.b, partition_.L());
    const double v = I.mapped ? I.cov->inverse(u) : u;
    return (2.0 * v - I.a - I.b) / (I.b - I.a);
}

double GalerkinSpace::trig_rho(int j, double s) const {
    const Interval &I = partition_.intervals()[j];
    const double u =
        unwrap_into(s, I.a - overlap_, I.b + overlap_, partition_.L());
    double v, vlo, vhi;
    if (I.mapped) {
        v = I.cov->inverse_extended(u);
        vlo = I.cov->inverse_extended(I.a - overlap_);
        vhi = I.cov->inverse_extended(I.b + overlap_);
    } else {
        v = u;
        vlo = I.a - overlap_;
        vhi = I.b + overlap_;
    }
    return 2.0 * kPi * (v - vlo) / (vhi - vlo);
}

cplx GalerkinSpace::basis_eval(int j, int r, double s) const {
    if (j < 0 || j >= interval_count()) {
        throw std::invalid_argument("interval index out of range");
    }
    const int d = degrees_[j];

    if (family_ == BasisFamily::algebraic) {
        if (r < 0 || r > d) {
            throw std::invalid_argument("basis index out of range");
        }
        if (partition_.locate(s) != j) {
            return {0.0, 0.0};
        }
        const double rho = alg_rho(j, s);
        double pw = 1.0;
        for (int i = 0; i < r; ++i) {
            pw *= rho;
        }
        return weight(s) * pw;
    }

    if (r < -d / 2 || r > d / 2) {
        throw std::invalid_argument("basis index out of range");
    }
    const double chi = pou_weight(j, s);
    if (chi <= 0.0) {
        return {0.0, 0.0};
    }
    const double rho = trig_rho(j, s);
    const cplx osc(std::cos(r * rho), std::sin(r * rho));
    return weight(s) * osc * chi;
}

void GalerkinSpace::basis_row(double s, cplx *out) const {
    std::fill(out, out + dim_, cplx(0.0, 0.0));
    const cplx w = weight(s);
    if (family_ == BasisFamily::algebraic) {
        const int j = partition_.locate(s);
        const double rho = alg_rho(j, s);
        cplx p = w;
        for (int r = 0; r <= degrees_[j]; ++r) {
            out[offsets_[j] + r] = p;
            p *= rho;
        }
        return;
    }
    for (int j = 0; j < interval_count(); ++j) {
        const double chi = pou_weight(j, s);
        if (chi <= 0.0) {
            continue;
        }
        const int d = degrees_[j];
        const double rho = trig_rho(j, s);
        const cplx mult(std::cos(rho), std::sin(rho));
        const double r0 = -0.5 * d * rho;
        cplx e = w * chi * cplx(std::cos(r0), std::sin(r0));
        for (int local = 0; local <= d; ++local) {
            out[offsets_[j] + local] = e;
            e *= mult;
        }
    }
}

cplx GalerkinSpace::expand(const Eigen::VectorXcd &coeffs, double s) const {
    if (static_cast<int>(coeffs.size()) != dim_) {
        throw std::invalid_argument(
            "coefficient vector does not match the space dimension");
    }
    const cplx w = weight(s);
    cplx acc(0.0, 0.0);
    if (family_ == BasisFamily::algebraic) {
        const int j = partition_.locate(s);
        const double rho = alg_rho(j, s);
        cplx p = w;
        for (int r = 0; r <= degrees_[j]; ++r) {
            acc += coeffs[offsets_[j] + r] * p;
            p *= rho;
        }
        return acc;
    }
    for (int j = 0; j < interval_count(); ++j) {
        const double chi = pou_weight(j, s);
        if (chi <= 0.0) {
            continue;
        }
        const int d = degrees_[j];
        const double rho = trig_rho(j, s);
        const cplx mult(std::cos(rho), std::sin(rho));
        const double r0 = -0.5 * d * rho;
        cplx e = w * chi * cplx(std::cos(r0), std::sin(r0));
        for (int local = 0; local <= d; ++local) {
            acc += coeffs[offsets_[j] + local] * e;
            e *= mult;
        }
    }
    return acc;
}

double cov_forward(const ChangeOfVariables &cov, double s) {
    return cov.forward(s);
}

double cov_inverse(const ChangeOfVariables &cov, double y) {
    return cov.inverse(y);
}

cplx basis_eval(const GalerkinSpace &space, int interval, int index,
                double s) {
    return space.basis_eval(interval, index, s);
}

} // namespace hfbem
