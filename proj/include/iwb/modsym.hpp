#pragma once

// Weight-two modular symbols for Gamma_0(N) through Manin symbols (c:d) in
// P^1(Z/N). The symbol (c:d) stands for g{0, oo} with g = [[a,b],[c,d]] in
// SL_2(Z); the path {oo, a/m} is decomposed along continued-fraction
// convergents.

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iwb/arith.hpp"
#include "iwb/curve.hpp"
#include "iwb/linalg.hpp"

namespace iwb {

/// Normalized representatives of P^1(Z/N).
class P1List {
   public:
    static constexpr long kTableBound = 1200;

    explicit P1List(long N) : N_(N) {
        require(N >= 1, ErrorKind::InvalidArgument, "level must be positive");
        if (N == 1) {
            list_.push_back({0, 0});
        } else {
            list_.push_back({0, 1});
            for (long g = 1; g < N; ++g) {
                if (N % g) continue;
                for (long d = 0; d < N; ++d) {
                    if (gcd(d, g) != 1) continue;
                    auto nd = normalize(g, d);
                    if (nd && nd->second == d) list_.push_back(*nd);
                }
            }
            std::sort(list_.begin(), list_.end());
        }
        for (std::size_t i = 0; i < list_.size(); ++i) map_[key(list_[i].first, list_[i].second)] = static_cast<long>(i);
        if (N > 1 && N <= kTableBound) {
            table_.assign(static_cast<std::size_t>(N * N), -1);
            for (long c = 0; c < N; ++c)
                for (long d = 0; d < N; ++d) {
                    auto nd = normalize(c, d);
                    if (nd) table_[c * N + d] = static_cast<std::int32_t>(map_.at(key(nd->first, nd->second)));
                }
        }
    }

    long level() const { return N_; }
    std::size_t size() const { return list_.size(); }
    const std::pair<long, long>& operator[](std::size_t i) const { return list_[i]; }

    /// Index of (c:d), or -1 when gcd(c, d, N) > 1.
    long index(long c, long d) const {
        if (N_ == 1) return 0;
        c = floor_mod(c, N_);
        d = floor_mod(d, N_);
        if (!table_.empty()) return table_[c * N_ + d];
        auto nd = normalize(c, d);
        if (!nd) return -1;
        return map_.at(key(nd->first, nd->second));
    }

    /// Canonical representative: first entry gcd(c, N), second entry minimal.
    std::optional<std::pair<long, long>> normalize(long c, long d) const {
        long N = N_;
        c = floor_mod(c, N);
        d = floor_mod(d, N);
        long g = gcd(c, N);
        if (gcd(g, d) != 1) return std::nullopt;
        if (g == N) return std::make_pair(0L, 1L);
        long M = N / g;
        long u = M == 1 ? 1 : inverse_mod(c / g, M);
        while (gcd(u, N) != 1) u += M;
        long d0 = mul_mod(u, d, N);
        long best = d0;
        for (long t = 1; t < g; ++t) {
            long lam = 1 + t * M;
            if (gcd(lam, N) != 1) continue;
            best = std::min(best, mul_mod(lam, d0, N));
        }
        return std::make_pair(g, best);
    }

   private:
    long key(long c, long d) const { return c * N_ + d; }

    long N_;
    std::vector<std::pair<long, long>> list_;
    std::unordered_map<long, long> map_;
    std::vector<std::int32_t> table_;
};

using SparseVector = std::vector<std::pair<long, Rational>>;

/// Heilbronn matrices of Merel for T_ell: a > b >= 0, d > c >= 0, ad - bc = ell.
inline std::vector<std::array<long, 4>> merel_matrices(long ell) {
    std::vector<std::array<long, 4>> out;
    for (long a = 1; a <= ell; ++a)
        for (long d = 1; d <= ell; ++d) {
            long bc = a * d - ell;
            if (bc < 0) continue;
            for (long b = 0; b < a; ++b) {
                if (b == 0) {
                    if (bc == 0)
                        for (long c = 0; c < d; ++c) out.push_back({a, 0, c, d});
                    continue;
                }
                if (bc % b) continue;
                long c = bc / b;
                if (c < d) out.push_back({a, b, c, d});
            }
        }
    return out;
}

/// Manin-symbol space for Gamma_0(N), either full (sign 0) or the quotient on
/// which the star involution acts by sign = +1 or -1.
class ManinSymbolSpace {
   public:
    static constexpr long kDefaultLevelBound = 10000;

    ManinSymbolSpace(long N, int sign, long level_bound = kDefaultLevelBound)
        : sign_(sign) {
        require(sign == 0 || sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be 0, +1 or -1");
        require(N <= level_bound, ErrorKind::Resource, "level " + std::to_string(N) + " exceeds the configured bound");
        p1_ = std::make_shared<P1List>(N);
        build();
    }

    long level() const { return p1_->level(); }
    int sign() const { return sign_; }
    const P1List& p1() const { return *p1_; }
    std::shared_ptr<const P1List> p1_shared() const { return p1_; }
    std::size_t generator_count() const { return p1_->size(); }
    long dimension() const { return static_cast<long>(basis_.size()); }

    /// Image of generator i in the quotient, over the basis.
    const SparseVector& image(long i) const { return images_[i]; }

    /// Generator index of the i-th basis element.
    long basis_generator(long i) const { return basis_[i]; }

    long s_index(long i) const {
        auto [c, d] = (*p1_)[i];
        return p1_->index(d, -c);
    }
    long t_index(long i) const {
        auto [c, d] = (*p1_)[i];
        return p1_->index(d, -c - d);
    }
    long star_index(long i) const {
        auto [c, d] = (*p1_)[i];
        return p1_->index(-c, d);
    }

    RVector image_dense(long i) const {
        RVector v(static_cast<std::size_t>(dimension()));
        for (const auto& [j, x] : images_[i]) v[j] += x;
        return v;
    }

    /// Row b holds the image of T_ell applied to basis element b.
    RMatrix hecke_matrix(long ell) const {
        require(is_prime(ell), ErrorKind::InvalidArgument, "Hecke operator index must be prime");
        auto mats = merel_matrices(ell);
        long dim = dimension();
        RMatrix T(static_cast<std::size_t>(dim), RVector(static_cast<std::size_t>(dim)));
        for (long b = 0; b < dim; ++b) {
            auto [c, d] = (*p1_)[basis_[b]];
            for (const auto& m : mats) {
                long idx = p1_->index(c * m[0] + d * m[2], c * m[1] + d * m[3]);
                if (idx < 0) continue;
                for (const auto& [j, x] : images_[idx]) T[b][j] += x;
            }
        }
        return T;
    }

    RMatrix star_matrix() const {
        long dim = dimension();
        RMatrix M(static_cast<std::size_t>(dim), RVector(static_cast<std::size_t>(dim)));
        for (long b = 0; b < dim; ++b)
            for (const auto& [j, x] : images_[star_index(basis_[b])]) M[b][j] += x;
        return M;
    }

    /// Dimension of the kernel of the boundary map.
    long cuspidal_dimension() const;

   private:
    void build();

    int sign_;
    std::shared_ptr<P1List> p1_;
    std::vector<long> basis_;
    std::vector<SparseVector> images_;
};

namespace detail {

// Union-find where each element is +-1 times its root, and roots may be forced to zero.
struct SignedUnionFind {
    std::vector<long> parent;
    std::vector<int> rel;
    std::vector<bool> zero;

    explicit SignedUnionFind(std::size_t n) : parent(n), rel(n, 1), zero(n, false) {
        std::iota(parent.begin(), parent.end(), 0L);
    }

    std::pair<long, int> find(long x) {
        if (parent[x] == x) return {x, 1};
        auto [r, s] = find(parent[x]);
        parent[x] = r;
        rel[x] *= s;
        return {r, rel[x]};
    }

    // Impose x = s * y.
    void unite(long x, long y, int s) {
        auto [rx, sx] = find(x);
        auto [ry, sy] = find(y);
        if (rx == ry) {
            if (sx != s * sy) zero[rx] = true;
            return;
        }
        // x = sx rx, y = sy ry, so rx = sx * s * sy * ry.
        parent[rx] = ry;
        rel[rx] = sx * s * sy;
        if (zero[rx]) zero[ry] = true;
    }
};

}  // namespace detail

inline void ManinSymbolSpace::build() {
    long n = static_cast<long>(p1_->size());
    detail::SignedUnionFind uf(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        uf.unite(i, s_index(i), -1);
        if (sign_ != 0) uf.unite(i, star_index(i), sign_);
    }
    std::vector<long> col(static_cast<std::size_t>(n), -1);
    std::vector<long> roots;
    for (long i = 0; i < n; ++i) {
        auto [r, s] = uf.find(i);
        if (r == i && !uf.zero[i]) {
            col[i] = static_cast<long>(roots.size());
            roots.push_back(i);
        }
    }
    long nr = static_cast<long>(roots.size());
    auto root_of = [&](long i) -> std::pair<long, int> {
        auto [r, s] = uf.find(i);
        if (uf.zero[r]) return {-1, 0};
        return {col[r], s};
    };
    RMatrix rel;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (long i = 0; i < n; ++i) {
        if (seen[i]) continue;
        long j = t_index(i), k = t_index(j);
        seen[i] = seen[j] = seen[k] = true;
        RVector row(static_cast<std::size_t>(nr));
        bool nonzero = false;
        for (long x : {i, j, k}) {
            auto [c, s] = root_of(x);
            if (c < 0) continue;
            row[c] += s;
            nonzero = true;
        }
        if (nonzero) rel.push_back(std::move(row));
    }
    Rref e = rref(std::move(rel), nr);
    std::vector<long> free_index(static_cast<std::size_t>(nr), -1);
    std::vector<bool> is_pivot(static_cast<std::size_t>(nr), false);
    for (long c : e.pivots) is_pivot[c] = true;
    for (long c = 0; c < nr; ++c)
        if (!is_pivot[c]) {
            free_index[c] = static_cast<long>(basis_.size());
            basis_.push_back(roots[c]);
        }
    std::vector<SparseVector> root_image(static_cast<std::size_t>(nr));
    for (long c = 0; c < nr; ++c)
        if (!is_pivot[c]) root_image[c].push_back({free_index[c], Rational(1)});
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        SparseVector v;
        for (long c = 0; c < nr; ++c)
            if (!is_pivot[c] && e.rows[r][c] != 0) v.push_back({free_index[c], -e.rows[r][c]});
        root_image[e.pivots[r]] = std::move(v);
    }
    images_.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        auto [c, s] = root_of(i);
        if (c < 0) continue;
        images_[i] = root_image[c];
        if (s < 0)
            for (auto& [j, x] : images_[i]) x = -x;
    }
}

/// Cusps of Gamma_0(N) up to equivalence, as reduced fractions u/v with v >= 0.
class CuspList {
   public:
    explicit CuspList(long N) : N_(N) {}

    /// Index of the class of u/v, registering a new class when needed.
    long index(long u, long v) {
        normalize(u, v);
        for (std::size_t i = 0; i < reps_.size(); ++i)
            if (equivalent(reps_[i].first, reps_[i].second, u, v)) return static_cast<long>(i);
        reps_.push_back({u, v});
        return static_cast<long>(reps_.size()) - 1;
    }

    std::size_t size() const { return reps_.size(); }
    std::pair<long, long> rep(std::size_t i) const { return reps_[i]; }

    static void normalize(long& u, long& v) {
        if (v < 0) {
            u = -u;
            v = -v;
        }
        long g = std::gcd(u, v);
        if (g > 1) {
            u /= g;
            v /= g;
        }
        if (v == 0) u = 1;
    }

    /// u1/v1 ~ u2/v2 iff v2 = s v1 (mod N) and s u2 = u1 (mod gcd(v1, N)) for a unit s.
    bool equivalent(long u1, long v1, long u2, long v2) const {
        long N = N_;
        long g = gcd(v1, N);
        if (g != gcd(v2, N)) return false;
        for (long s = 1; s <= N; ++s) {
            if (gcd(s, N) != 1) continue;
            if (floor_mod(v2 - s * v1, N) != 0) continue;
            if (floor_mod(s * u2 - u1, g) == 0) return true;
        }
        return false;
    }

   private:
    long N_;
    std::vector<std::pair<long, long>> reps_;
};

/// Number of cusps of Gamma_0(N).
inline long cusp_count(long N) {
    long total = 0;
    for (long d = 1; d <= N; ++d)
        if (N % d == 0) total += euler_phi(std::gcd(d, N / d));
    return total;
}

/// Integer lift (c', d') of (c:d) with gcd(c', d') = 1, completed to [[a,b],[c',d']] in SL_2(Z).
inline std::array<long, 4> lift_to_sl2z(long c, long d, long N) {
    if (N == 1) return {1, 0, 0, 1};
    c = floor_mod(c, N);
    d = floor_mod(d, N);
    if (c == 0) c = N;
    while (gcd(c, d) != 1) d += N;
    long s, t;
    xgcd(d, c, s, t);  // s d + t c = 1
    return {s, -t, c, d};
}

inline long ManinSymbolSpace::cuspidal_dimension() const {
    long N = level();
    CuspList cusps(N);
    std::vector<std::pair<long, long>> ends;  // cusp ids (head, tail) per basis element
    for (long b = 0; b < dimension(); ++b) {
        auto [c, d] = (*p1_)[basis_[b]];
        auto g = lift_to_sl2z(c, d, N);
        ends.push_back({cusps.index(g[0], g[2]), cusps.index(g[1], g[3])});
    }
    // In a signed quotient [alpha] is identified with sign * [-alpha].
    std::vector<std::pair<long, long>> star_pairs;
    if (sign_ != 0)
        for (std::size_t i = 0; i < cusps.size(); ++i) {
            auto [u, v] = cusps.rep(i);
            star_pairs.push_back({static_cast<long>(i), cusps.index(-u, v)});
        }
    long nc = static_cast<long>(cusps.size());
    detail::SignedUnionFind uf(static_cast<std::size_t>(nc));
    for (auto [i, j] : star_pairs) uf.unite(i, j, sign_);
    std::vector<long> colmap(static_cast<std::size_t>(nc), -1);
    long nrows = 0;
    for (long i = 0; i < nc; ++i) {
        auto [r, s] = uf.find(i);
        if (r == i && !uf.zero[i]) colmap[i] = nrows++;
    }
    RMatrix B(static_cast<std::size_t>(nrows), RVector(static_cast<std::size_t>(dimension())));
    for (long b = 0; b < dimension(); ++b) {
        for (auto [cid, x] : {std::pair<long, int>{ends[b].first, 1}, std::pair<long, int>{ends[b].second, -1}}) {
            auto [r, s] = uf.find(cid);
            if (uf.zero[r]) continue;
            B[colmap[r]][b] += x * s;
        }
    }
    return dimension() - rank(B, dimension());
}

/// Rational +-eigensymbol of an elliptic curve, scaled to integer values
/// with content 1 on the Manin generators.
class EigenSymbol {
   public:
    EigenSymbol(std::shared_ptr<const P1List> p1, int sign, std::vector<long> values, Rational content,
                std::vector<std::pair<long, long>> certificate, std::string label)
        : p1_(std::move(p1)), sign_(sign), values_(std::move(values)), content_(std::move(content)),
          certificate_(std::move(certificate)), label_(std::move(label)) {}

    long level() const { return p1_->level(); }
    int sign() const { return sign_; }
    const std::string& label() const { return label_; }
    const std::vector<long>& values() const { return values_; }
    const Rational& normalization_content() const { return content_; }
    const std::vector<std::pair<long, long>>& certificate() const { return certificate_; }
    const P1List& p1() const { return *p1_; }

    /// Value on the Manin symbol (c:d).
    long manin_value(long c, long d) const {
        long i = p1_->index(c, d);
        require(i >= 0, ErrorKind::InvalidArgument, "not a point of P^1(Z/N)");
        return values_[i];
    }

    /// [a/m] = value on {oo, a/m}, along the regular continued fraction.
    long eval_path(long a, long m) const { return eval_expansion(a, m, false); }

    /// Same value along the nearest-integer continued fraction.
    long eval_path_nearest(long a, long m) const { return eval_expansion(a, m, true); }

    /// Sum over consecutive unimodular steps p'/q' -> p/q of the symbol (eps q : q'),
    /// eps = p q' - p' q. The chain must start at 1/0.
    long eval_chain(const std::vector<std::pair<long, long>>& chain) const {
        long total = 0;
        for (std::size_t j = 1; j < chain.size(); ++j) {
            auto [pp, qp] = chain[j - 1];
            auto [pc, qc] = chain[j];
            long eps = pc * qp - pp * qc;
            require(eps == 1 || eps == -1, ErrorKind::InvalidArgument, "chain step is not unimodular");
            total += manin_value(eps * qc, qp);
        }
        return total;
    }

   private:
    long eval_expansion(long a, long m, bool nearest) const {
        require(m >= 1, ErrorKind::InvalidArgument, "path denominator must be positive");
        long g = std::gcd(a, m);
        a /= g;
        m /= g;
        std::vector<std::pair<long, long>> chain{{1, 0}};
        long p2 = 0, q2 = 1, p1 = 1, q1 = 0;  // convergents j-2 and j-1
        long num = a, den = m;
        while (den != 0) {
            long b;
            if (nearest) {
                long n2 = den > 0 ? num : -num, d2 = den > 0 ? den : -den;
                b = floor_div(2 * n2 + d2, 2 * d2);
            } else {
                b = floor_div(num, den);
            }
            long p0 = b * p1 + p2, q0 = b * q1 + q2;
            chain.push_back({p0, q0});
            p2 = p1;
            q2 = q1;
            p1 = p0;
            q1 = q0;
            long r = num - b * den;
            num = den;
            den = r;
        }
        return eval_chain(chain);
    }

    static long floor_div(long a, long b) {
        long q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }

    std::shared_ptr<const P1List> p1_;
    int sign_;
    std::vector<long> values_;
    Rational content_;
    std::vector<std::pair<long, long>> certificate_;
    std::string label_;
};

/// Isolates the one-dimensional simultaneous eigenspace for the curve's a_ell
/// (good ell in increasing order) in a signed space.
inline EigenSymbol extract_eigensymbol(const ManinSymbolSpace& space, const CurveData& curve, long ell_bound = 100) {
    require(space.sign() != 0, ErrorKind::InvalidArgument, "eigensymbols live in a signed space");
    require(curve.conductor() == space.level(), ErrorKind::InvalidArgument,
            "conductor of " + curve.label() + " differs from the space level");
    long dim = space.dimension();
    require(dim > 0, ErrorKind::IsolationFailure, "space is zero");
    // Columns of B span the current candidate space.
    RMatrix B(static_cast<std::size_t>(dim), RVector(static_cast<std::size_t>(dim)));
    for (long i = 0; i < dim; ++i) B[i][i] = 1;
    long k = dim;
    std::vector<std::pair<long, long>> cert;
    for (long ell : primes_up_to(ell_bound)) {
        if (k <= 1) break;
        if (!curve.has_good_reduction(ell)) continue;
        long a = curve.ap(ell);
        RMatrix A = space.hecke_matrix(ell);
        for (long i = 0; i < dim; ++i) A[i][i] -= a;
        RMatrix null = nullspace(mat_mul(A, B), k);
        RMatrix nb(static_cast<std::size_t>(dim), RVector(null.size()));
        for (long i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < null.size(); ++j)
                for (long t = 0; t < k; ++t)
                    if (B[i][t] != 0 && null[j][t] != 0) nb[i][j] += B[i][t] * null[j][t];
        B = std::move(nb);
        k = static_cast<long>(null.size());
        cert.push_back({ell, a});
    }
    require(k == 1, ErrorKind::IsolationFailure,
            "eigenspace for " + curve.label() + " has dimension " + std::to_string(k));
    RVector f(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i) f[i] = B[i][0];
    std::size_t n = space.generator_count();
    std::vector<Rational> raw(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, x] : space.image(static_cast<long>(i))) raw[i] += x * f[j];
    // Divide by content: gcd of numerators over lcm of denominators.
    Integer num_gcd = 0, den_lcm = 1;
    for (const auto& v : raw) {
        if (v == 0) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den_mpz_t());
    }
    require(num_gcd != 0, ErrorKind::IsolationFailure, "eigensymbol vanishes on all generators");
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    // Fix the overall sign: first nonzero value positive.
    for (const auto& v : raw)
        if (v != 0) {
            if (v < 0) content = -content;
            break;
        }
    std::vector<long> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational q = raw[i] / content;
        require(q.get_den() == 1 && q.get_num().fits_slong_p(), ErrorKind::Internal, "unitized value out of range");
        values[i] = q.get_num().get_si();
    }
    return EigenSymbol(space.p1_shared(), space.sign(), std::move(values), content, std::move(cert), curve.label());
}

/// Birch sum sum_{u mod |D|} chi_D(u) [a/m + u/|D|] using the base symbol of
/// sign target * sign(D). Not normalized.
inline Integer twist_symbol_value(const EigenSymbol& plus, const EigenSymbol& minus, long D, int target_sign, long a,
                                  long m) {
    require(plus.sign() == 1 && minus.sign() == -1, ErrorKind::InvalidArgument, "expected a (+, -) symbol pair");
    require(target_sign == 1 || target_sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
    if (D == 1) return target_sign == 1 ? plus.eval_path(a, m) : minus.eval_path(a, m);
    require(is_fundamental_discriminant(D), ErrorKind::InvalidArgument, "D must be a fundamental discriminant");
    require(std::gcd(D, m) == 1, ErrorKind::InvalidArgument, "twist needs gcd(D, m) = 1");
    const EigenSymbol& base = (D < 0 ? -target_sign : target_sign) == 1 ? plus : minus;
    long ad = std::labs(D);
    Integer total = 0;
    for (long u = 1; u < ad; ++u) {
        int chi = kronecker(D, u);
        if (chi == 0) continue;
        long v = base.eval_path(a * ad + u * m, m * ad);
        total += chi > 0 ? v : -v;
    }
    return total;
}

}  // namespace iwb
