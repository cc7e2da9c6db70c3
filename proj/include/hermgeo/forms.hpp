#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "hermgeo/spectral.hpp"
#include "hermgeo/tensor_ops.hpp"

namespace hermgeo {

namespace detail {

/// Sorted-multi-index basis of degree-p alternating forms in dimension d,
/// with lookup from arbitrary distinct tuples to (position, permutation sign).
class FormBasis {
public:
    static const FormBasis& get(int d, int p) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<FormBasis>> cache;
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_pair(d, p);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::unique_ptr<FormBasis>(new FormBasis(d, p))).first;
        return *it->second;
    }

    int dim() const { return d_; }
    int degree() const { return p_; }
    int count() const { return static_cast<int>(combos_.size()); }
    const std::vector<int>& combo(int c) const { return combos_[c]; }

    /// Position of a sorted tuple; -1 when not strictly increasing.
    int position(const int* idx) const {
        int pos = 0;
        // rank in the lexicographic enumeration of p-combinations of {0..d-1}
        int prev = -1;
        for (int s = 0; s < p_; ++s) {
            if (idx[s] <= prev) return -1;
            for (int v = prev + 1; v < idx[s]; ++v) pos += binom(d_ - 1 - v, p_ - 1 - s);
            prev = idx[s];
        }
        return pos;
    }

    /// Position and sign for an arbitrary tuple; sign 0 on repeated indices.
    std::pair<int, int> locate(const int* idx) const {
        std::array<int, 8> s{};
        for (int i = 0; i < p_; ++i) s[i] = idx[i];
        int sign = 1;
        for (int i = 0; i < p_; ++i)
            for (int j = 0; j + 1 < p_ - i; ++j)
                if (s[j] > s[j + 1]) {
                    std::swap(s[j], s[j + 1]);
                    sign = -sign;
                }
        for (int i = 0; i + 1 < p_; ++i)
            if (s[i] == s[i + 1]) return {-1, 0};
        return {position(s.data()), sign};
    }

    static int binom(int n, int k) {
        if (k < 0 || k > n) return 0;
        long long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return static_cast<int>(r);
    }

private:
    FormBasis(int d, int p) : d_(d), p_(p) {
        std::vector<int> idx(p);
        for (int i = 0; i < p; ++i) idx[i] = i;
        if (p == 0) {
            combos_.push_back({});
            return;
        }
        while (true) {
            combos_.push_back(idx);
            int s = p - 1;
            while (s >= 0 && idx[s] == d - p + s) --s;
            if (s < 0) break;
            ++idx[s];
            for (int t = s + 1; t < p; ++t) idx[t] = idx[t - 1] + 1;
        }
    }
    int d_, p_;
    std::vector<std::vector<int>> combos_;
};

/// Shuffle table for wedging degree pa with degree pb in dimension d:
/// for each output combo, the list of (posA, posB, sign) contributions.
struct WedgeTable {
    struct Term {
        int a, b, sign;
    };
    std::vector<std::vector<Term>> terms;  // indexed by output combo

    static const WedgeTable& get(int d, int pa, int pb) {
        static std::mutex mu;
        static std::map<std::tuple<int, int, int>, std::unique_ptr<WedgeTable>> cache;
        std::lock_guard<std::mutex> lk(mu);
        auto key = std::make_tuple(d, pa, pb);
        auto it = cache.find(key);
        if (it == cache.end()) {
            auto t = std::unique_ptr<WedgeTable>(new WedgeTable);
            const auto& BA = FormBasis::get(d, pa);
            const auto& BB = FormBasis::get(d, pb);
            const auto& BO = FormBasis::get(d, pa + pb);
            t->terms.resize(BO.count());
            // enumerate subsets I of each output combo K with |I| = pa
            for (int c = 0; c < BO.count(); ++c) {
                const auto& K = BO.combo(c);
                int p = pa + pb;
                std::vector<int> pick(pa);
                for (int i = 0; i < pa; ++i) pick[i] = i;
                while (true) {
                    std::vector<int> I, J;
                    std::vector<bool> in(p, false);
                    for (int i : pick) in[i] = true;
                    int sign = 1;
                    // sign of the (I,J) shuffle: count transpositions moving I to front
                    int seenJ = 0;
                    for (int i = 0; i < p; ++i) {
                        if (in[i]) {
                            I.push_back(K[i]);
                            if (seenJ % 2 == 1 && false) {}
                            sign *= (seenJ % 2 == 0) ? 1 : 1;  // computed below instead
                        } else {
                            J.push_back(K[i]);
                            ++seenJ;
                        }
                    }
                    // permutation sign: positions of I within K
                    int inv = 0;
                    {
                        int jcount = 0;
                        for (int i = 0; i < p; ++i) {
                            if (!in[i]) ++jcount;
                            else inv += jcount;
                        }
                    }
                    sign = (inv % 2 == 0) ? 1 : -1;
                    int pa_pos = BA.position(I.data());
                    int pb_pos = BB.position(J.data());
                    t->terms[c].push_back({pa_pos, pb_pos, sign});
                    // next subset
                    int s = pa - 1;
                    while (s >= 0 && pick[s] == p - pa + s) --s;
                    if (s < 0) break;
                    ++pick[s];
                    for (int u = s + 1; u < pa; ++u) pick[u] = pick[u - 1] + 1;
                }
            }
            it = cache.emplace(key, std::move(t)).first;
        }
        return *it->second;
    }
};

}  // namespace detail

/// Alternating p-form with compressed components on the sorted-multi-index
/// basis; component value = form evaluated on the basis vectors of the combo.
template <typename Scalar>
class BasicAltForm {
public:
    BasicAltForm() = default;
    BasicAltForm(std::shared_ptr<const FlatChart> chart, int degree)
        : chart_(std::move(chart)), p_(degree) {
        nc_ = detail::FormBasis::get(chart_->dim(), p_).count();
        values_.assign(chart_->num_points() * nc_, Scalar(0));
    }

    const FlatChart& chart() const { return *chart_; }
    std::shared_ptr<const FlatChart> chart_ptr() const { return chart_; }
    int degree() const { return p_; }
    int comps() const { return nc_; }
    std::size_t num_points() const { return chart_->num_points(); }
    Scalar* at(std::size_t pt) { return values_.data() + pt * nc_; }
    const Scalar* at(std::size_t pt) const { return values_.data() + pt * nc_; }
    Scalar& operator()(std::size_t pt, int c) { return values_[pt * nc_ + c]; }
    Scalar operator()(std::size_t pt, int c) const { return values_[pt * nc_ + c]; }
    Scalar* data() { return values_.data(); }
    const Scalar* data() const { return values_.data(); }
    std::size_t size() const { return values_.size(); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::shared_ptr<const FlatChart> chart_;
    int p_ = 0;
    int nc_ = 0;
    std::vector<Scalar> values_;
};

using AltForm = BasicAltForm<double>;
using CAltForm = BasicAltForm<std::complex<double>>;

/// Compress the antisymmetric part of a rank-2 lower tensor into a 2-form.
inline AltForm two_form_from_tensor(const TensorField& t) {
    AltForm w(t.chart_ptr(), 2);
    const auto& B = detail::FormBasis::get(t.dim(), 2);
    for (std::size_t p = 0; p < t.num_points(); ++p)
        for (int c = 0; c < B.count(); ++c) {
            int i = B.combo(c)[0], j = B.combo(c)[1];
            w(p, c) = t(p, t.cidx(i, j));
        }
    return w;
}

template <typename SA, typename SB>
auto wedge(const BasicAltForm<SA>& a, const BasicAltForm<SB>& b) {
    using SO = decltype(SA() * SB());
    const int d = a.chart().dim();
    BasicAltForm<SO> out(a.chart_ptr(), a.degree() + b.degree());
    const auto& table = detail::WedgeTable::get(d, a.degree(), b.degree());
    parallel_for(a.num_points(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const SA* pa = a.at(p);
            const SB* pb = b.at(p);
            SO* po = out.at(p);
            for (int c = 0; c < out.comps(); ++c) {
                SO s(0);
                for (const auto& t : table.terms[c])
                    s += double(t.sign) * pa[t.a] * pb[t.b];
                po[c] = s;
            }
        }
    });
    return out;
}

template <typename S>
BasicAltForm<S> wedge_power(const BasicAltForm<S>& a, int k) {
    if (k == 0) {
        BasicAltForm<S> one(a.chart_ptr(), 0);
        for (std::size_t p = 0; p < one.num_points(); ++p) one(p, 0) = S(1);
        return one;
    }
    BasicAltForm<S> r = a;
    for (int i = 1; i < k; ++i) r = wedge(r, a);
    return r;
}

/// Exterior derivative via the alternating sum of component derivatives
/// (spectral along active axes; inactive-axis terms vanish structurally).
template <typename S>
BasicAltForm<S> exterior_derivative(const BasicAltForm<S>& a) {
    const FlatChart& ch = a.chart();
    const int d = ch.dim();
    const auto& Bin = detail::FormBasis::get(d, a.degree());
    const auto& Bout = detail::FormBasis::get(d, a.degree() + 1);
    BasicAltForm<S> out(a.chart_ptr(), a.degree() + 1);

    constexpr int reals_per = sizeof(S) / sizeof(double);
    for (int axis : ch.active_axes()) {
        std::vector<S> deriv(a.size());
        differentiate_raw(ch, axis, a.comps() * reals_per,
                          reinterpret_cast<const double*>(a.data()),
                          reinterpret_cast<double*>(deriv.data()));
        // add (-1)^t d_axis a_{K minus K_t} for every output combo containing axis
        for (int c = 0; c < Bout.count(); ++c) {
            const auto& K = Bout.combo(c);
            int t = -1;
            for (int s = 0; s <= a.degree(); ++s)
                if (K[s] == axis) t = s;
            if (t < 0) continue;
            std::vector<int> rest;
            for (int s = 0; s <= a.degree(); ++s)
                if (s != t) rest.push_back(K[s]);
            int pos = Bin.position(rest.data());
            double sgn = (t % 2 == 0) ? 1.0 : -1.0;
            const std::size_t nc_in = a.comps(), nc_out = out.comps();
            for (std::size_t p = 0; p < a.num_points(); ++p)
                out.data()[p * nc_out + c] += sgn * deriv[p * nc_in + pos];
        }
    }
    return out;
}

inline CAltForm complexify(const AltForm& a) {
    CAltForm out(a.chart_ptr(), a.degree());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i];
    return out;
}

inline AltForm real_part(const CAltForm& a) {
    AltForm out(a.chart_ptr(), a.degree());
    for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i].real();
    return out;
}

inline double max_imag(const CAltForm& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i].imag()));
    return m;
}

/// Per-point complex coframes adapted to J: rows 0..n-1 span the (1,0)
/// covectors (+i eigenspace of J^T), rows n..2n-1 their conjugates. Caches
/// the basis-change and its inverse for bidegree projections.
class BidegreeContext {
public:
    BidegreeContext(const TensorField& J) : chart_(J.chart_ptr()) {
        const int d = J.dim(), n = d / 2;
        const std::size_t npts = J.num_points();
        C_.resize(npts);
        M_.resize(npts);
        using CMat = Eigen::MatrixXcd;
        parallel_for(npts, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                Eigen::MatrixXd Jm(d, d);
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) Jm(i, j) = J(p, J.cidx(i, j));
                // projector onto the +i eigenspace of J^T acting on covectors
                CMat Q = 0.5 * (CMat::Identity(d, d) -
                                std::complex<double>(0, 1) * Jm.transpose().cast<std::complex<double>>());
                // pivoted Gram-Schmidt over projected coordinate covectors
                CMat rows(n, d);
                std::vector<CMat::Scalar> dummy;
                std::vector<Eigen::VectorXcd> cand(d);
                for (int i = 0; i < d; ++i) cand[i] = Q.col(i).conjugate();
                // note: covector with components zeta_i, zeta(J e_j) = i zeta_j
                // means J^T zeta = i zeta; Q applied to unit vectors gives columns.
                for (int i = 0; i < d; ++i) cand[i] = Q * Eigen::VectorXcd::Unit(d, i);
                int got = 0;
                for (int pass = 0; pass < d && got < n; ++pass) {
                    // pick the largest remaining candidate
                    int best = -1;
                    double bn = 1e-8;
                    for (int i = 0; i < d; ++i) {
                        double nn = cand[i].norm();
                        if (nn > bn) {
                            bn = nn;
                            best = i;
                        }
                    }
                    if (best < 0) break;
                    Eigen::VectorXcd v = cand[best] / cand[best].norm();
                    rows.row(got++) = v.transpose();
                    for (int i = 0; i < d; ++i) cand[i] -= v * (v.adjoint() * cand[i]);
                }
                if (got < n)
                    throw numerical_error("bidegree", "rank-deficient eigenprojector",
                                          static_cast<std::ptrdiff_t>(p));
                CMat C(d, d);
                C.topRows(n) = rows;
                C.bottomRows(n) = rows.conjugate();
                C_[p] = C;
                M_[p] = C.inverse();
            }
        });
    }

    const Eigen::MatrixXcd& coframe(std::size_t p) const { return C_[p]; }
    const Eigen::MatrixXcd& inverse(std::size_t p) const { return M_[p]; }
    std::shared_ptr<const FlatChart> chart() const { return chart_; }

private:
    std::shared_ptr<const FlatChart> chart_;
    std::vector<Eigen::MatrixXcd> C_;
    std::vector<Eigen::MatrixXcd> M_;
};

namespace detail {

inline std::complex<double> minor_det(const Eigen::MatrixXcd& M, const std::vector<int>& rows,
                                      const std::vector<int>& cols) {
    const int p = static_cast<int>(rows.size());
    Eigen::MatrixXcd sub(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) sub(i, j) = M(rows[i], cols[j]);
    switch (p) {
        case 0: return 1.0;
        case 1: return sub(0, 0);
        case 2: return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
        default: return sub.determinant();
    }
}

}  // namespace detail

/// Keep the (p,q) bidegree piece of a complexified degree-(p+q) form.
/// Purely algebraic: valid for any almost complex structure.
inline CAltForm bidegree_project(const CAltForm& a, int p, int q, const BidegreeContext& ctx) {
    const int d = a.chart().dim(), n = d / 2;
    const int deg = a.degree();
    if (p + q != deg) throw numerical_error("bidegree", "p+q must equal the form degree");
    const auto& B = detail::FormBasis::get(d, deg);
    CAltForm out(a.chart_ptr(), deg);
    parallel_for(a.num_points(), [&](std::size_t lo, std::size_t hi) {
        std::vector<std::complex<double>> tilde(B.count());
        for (std::size_t pt = lo; pt < hi; ++pt) {
            const auto& M = ctx.inverse(pt);
            const auto& C = ctx.coframe(pt);
            // to the zeta basis, filter by signature, back to dx
            for (int k = 0; k < B.count(); ++k) {
                const auto& K = B.combo(k);
                int holo = 0;
                for (int s = 0; s < deg; ++s)
                    if (K[s] < n) ++holo;
                if (holo != p) {
                    tilde[k] = 0.0;
                    continue;
                }
                std::complex<double> s(0);
                for (int i = 0; i < B.count(); ++i)
                    s += detail::minor_det(M, B.combo(i), K) * a(pt, i);
                tilde[k] = s;
            }
            for (int i = 0; i < B.count(); ++i) {
                std::complex<double> s(0);
                for (int k = 0; k < B.count(); ++k)
                    if (tilde[k] != 0.0) s += detail::minor_det(C, B.combo(k), B.combo(i)) * tilde[k];
                out(pt, i) = s;
            }
        }
    });
    return out;
}

}  // namespace hermgeo
