#include "dihlab/galmod.hpp"

#include <algorithm>
#include <numeric>

#include "dihlab/arith.hpp"

namespace dihlab {

// ---------------------------------------------------------------------------
// group ring words

GroupRingWord GroupRingWord::zero() { return {}; }

GroupRingWord GroupRingWord::one() {
    GroupRingWord w;
    w.terms_.push_back({1, {}});
    return w;
}

GroupRingWord GroupRingWord::scalar(long long c) {
    GroupRingWord w;
    if (c != 0) w.terms_.push_back({c, {}});
    return w;
}

GroupRingWord GroupRingWord::sigma() {
    GroupRingWord w;
    w.terms_.push_back({1, {0}});
    return w;
}

GroupRingWord GroupRingWord::tau() {
    GroupRingWord w;
    w.terms_.push_back({1, {1}});
    return w;
}

GroupRingWord GroupRingWord::sigma_power_sum(long p) {
    GroupRingWord w;
    for (long k = 0; k < p; ++k)
        w.terms_.push_back({1, std::vector<uint8_t>(static_cast<size_t>(k), 0)});
    return w;
}

GroupRingWord GroupRingWord::operator+(const GroupRingWord& o) const {
    GroupRingWord w = *this;
    w.terms_.insert(w.terms_.end(), o.terms_.begin(), o.terms_.end());
    return w;
}

GroupRingWord GroupRingWord::operator-(const GroupRingWord& o) const {
    GroupRingWord w = *this;
    for (auto t : o.terms_) {
        t.coeff = -t.coeff;
        w.terms_.push_back(std::move(t));
    }
    return w;
}

GroupRingWord GroupRingWord::operator*(const GroupRingWord& o) const {
    GroupRingWord w;
    for (const auto& s : terms_)
        for (const auto& t : o.terms_) {
            Term prod;
            prod.coeff = s.coeff * t.coeff;
            prod.letters = s.letters;
            prod.letters.insert(prod.letters.end(), t.letters.begin(), t.letters.end());
            w.terms_.push_back(std::move(prod));
        }
    return w;
}

GroupRingWord GroupRingWord::times(long long c) const {
    GroupRingWord w = *this;
    for (auto& t : w.terms_) t.coeff *= c;
    if (c == 0) w.terms_.clear();
    return w;
}

GroupRingWord GroupRingWord::pow(unsigned e) const {
    GroupRingWord acc = one();
    for (unsigned i = 0; i < e; ++i) acc = acc * (*this);
    return acc;
}

// ---------------------------------------------------------------------------
// modular matrix helpers

namespace {

long long mod_floor_ll(long long x, long long m) {
    long long r = x % m;
    return r < 0 ? r + m : r;
}

void reduce_rows(MatI64& m, const std::vector<long long>& orders) {
    for (size_t i = 0; i < m.size(); ++i)
        for (auto& x : m[i]) x = mod_floor_ll(x, orders[i]);
}

MatI64 mat_identity64(size_t k) {
    MatI64 m(k, std::vector<long long>(k, 0));
    for (size_t i = 0; i < k; ++i) m[i][i] = 1;
    return m;
}

MatI64 mat_mul_mod(const MatI64& a, const MatI64& b, const std::vector<long long>& orders) {
    size_t n = a.size(), kk = b.size(), mm = b.empty() ? 0 : b[0].size();
    MatI64 r(n, std::vector<long long>(mm, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < kk; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < mm; ++j)
                r[i][j] = (r[i][j] + a[i][t] * b[t][j]) % orders[i];
        }
    reduce_rows(r, orders);
    return r;
}

bool mat_equal(const MatI64& a, const MatI64& b) { return a == b; }

long long pow_mod_ll(long long a, long long e, long long m) {
    long long r = 1 % m;
    a = mod_floor_ll(a, m);
    while (e > 0) {
        if (e & 1) r = r * a % m;
        a = a * a % m;
        e >>= 1;
    }
    return r;
}

long long mod_inverse_ll(long long a, long long m) {
    long long g0 = mod_floor_ll(a, m), g1 = m, u0 = 1, u1 = 0;
    while (g1 != 0) {
        long long q = g0 / g1;
        long long t = g0 - q * g1;
        g0 = g1;
        g1 = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
    }
    if (g0 != 1) throw std::invalid_argument("mod_inverse: not invertible");
    return mod_floor_ll(u0, m);
}

// Eigenvalue lift of r: the element of the order-m subgroup of (Z/p^t)^*
// congruent to r mod p.
long long eigenvalue_lift(long r, long long exponent, long p) {
    if (exponent <= 1) return 0;
    long long e = exponent, steps = 0;
    long long q = 1;
    while (e % p == 0) {
        e /= p;
        ++steps;
    }
    long long lift = mod_floor_ll(r, exponent);
    for (long long i = 1; i < steps; ++i) q *= p;
    return pow_mod_ll(lift, q, exponent);
}

bool is_p_power(long long n, long p) {
    if (n < 2) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Subgroup

Integer Subgroup::order() const {
    Integer full = 1, mine = 1;
    for (size_t i = 0; i < orders_.size(); ++i) {
        full *= to_integer(orders_[i]);
        mine *= hermite_[i][i];
    }
    return full / mine;
}

bool Subgroup::is_trivial() const { return order() == 1; }

AbelianGroupStructure Subgroup::structure() const {
    size_t k = orders_.size();
    if (k == 0) return {};
    MatZ x(k, std::vector<Integer>(k, 0));
    for (size_t j = 0; j < k; ++j) {
        std::vector<Integer> target(k, 0), col;
        target[j] = to_integer(orders_[j]);
        if (!hermite_solve(hermite_, target, col))
            throw std::logic_error("subgroup: relations not inside lattice");
        for (size_t i = 0; i < k; ++i) x[i][j] = col[i];
    }
    auto snf = smith_normal_form(x);
    std::vector<Integer> factors;
    for (const auto& d : snf.diag)
        if (d > 1) factors.push_back(d);
    return AbelianGroupStructure::from_invariant_factors(factors);
}

bool Subgroup::contains(const std::vector<long long>& element) const {
    std::vector<Integer> v(element.size());
    for (size_t i = 0; i < element.size(); ++i) v[i] = to_integer(element[i]);
    std::vector<Integer> x;
    return hermite_solve(hermite_, v, x);
}

bool Subgroup::contains(const Subgroup& other) const {
    size_t k = orders_.size();
    for (size_t j = 0; j < k; ++j) {
        std::vector<Integer> col(k), x;
        for (size_t i = 0; i < k; ++i) col[i] = other.hermite_[i][j];
        if (!hermite_solve(hermite_, col, x)) return false;
    }
    return true;
}

bool Subgroup::operator==(const Subgroup& o) const {
    return orders_ == o.orders_ && hermite_ == o.hermite_;
}

// ---------------------------------------------------------------------------
// PGroupModule

PGroupModule::PGroupModule(long p, long m, long r, std::vector<long long> orders, MatI64 sigma,
                           MatI64 tau)
    : p_(p), m_(m), r_(r), orders_(std::move(orders)), sigma_(std::move(sigma)),
      tau_(std::move(tau)) {
    if (p_ < 3 || !is_prime(to_integer(p_))) throw std::invalid_argument("module: p must be an odd prime");
    if (m_ < 1 || (p_ - 1) % m_ != 0) throw std::invalid_argument("module: m must divide p-1");
    long long rr = mod_floor_ll(r_, p_);
    long long acc = 1;
    long ord = 0;
    for (long i = 1; i <= m_; ++i) {
        acc = acc * rr % p_;
        if (acc == 1) {
            ord = i;
            break;
        }
    }
    if (ord != m_) throw std::invalid_argument("module: r must have order m mod p");
    size_t k = orders_.size();
    for (long long d : orders_) {
        if (!is_p_power(d, p_)) throw std::invalid_argument("module: orders must be p-powers");
        if (d > (1LL << 20)) throw std::invalid_argument("module: order too large");
    }
    if (sigma_.size() != k || tau_.size() != k)
        throw std::invalid_argument("module: matrix dimension mismatch");
    for (auto* mt : {&sigma_, &tau_}) {
        for (size_t i = 0; i < k; ++i) {
            if ((*mt)[i].size() != k) throw std::invalid_argument("module: matrix dimension mismatch");
        }
        reduce_rows(*mt, orders_);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j)
                if (((*mt)[i][j] * orders_[j]) % orders_[i] != 0)
                    throw std::invalid_argument("module: action matrix not well defined");
    }
    // relations
    MatI64 id = mat_identity64(k);
    MatI64 sp = id;
    for (long i = 0; i < p_; ++i) sp = mat_mul_mod(sp, sigma_, orders_);
    if (!mat_equal(sp, id)) throw std::invalid_argument("module: sigma^p != 1");
    MatI64 tm = id;
    for (long i = 0; i < m_; ++i) tm = mat_mul_mod(tm, tau_, orders_);
    if (!mat_equal(tm, id)) throw std::invalid_argument("module: tau^m != 1");
    MatI64 tinv = id;
    for (long i = 0; i < m_ - 1; ++i) tinv = mat_mul_mod(tinv, tau_, orders_);
    MatI64 lhs = mat_mul_mod(mat_mul_mod(tau_, sigma_, orders_), tinv, orders_);
    MatI64 sr = id;
    for (long long i = 0; i < mod_floor_ll(r_, p_); ++i) sr = mat_mul_mod(sr, sigma_, orders_);
    if (!mat_equal(lhs, sr)) throw std::invalid_argument("module: tau sigma tau^-1 != sigma^r");
}

Integer PGroupModule::order() const {
    Integer n = 1;
    for (long long d : orders_) n *= to_integer(d);
    return n;
}

long long PGroupModule::exponent() const {
    long long e = 1;
    for (long long d : orders_) e = std::max(e, d);
    return e;
}

AbelianGroupStructure PGroupModule::structure() const {
    std::vector<Integer> v;
    for (long long d : orders_) v.push_back(to_integer(d));
    return AbelianGroupStructure::from_cyclic_orders(v);
}

MatI64 PGroupModule::word_matrix(const GroupRingWord& w) const {
    size_t k = rank();
    MatI64 acc(k, std::vector<long long>(k, 0));
    for (const auto& term : w.terms()) {
        MatI64 prod = mat_identity64(k);
        for (uint8_t letter : term.letters)
            prod = mat_mul_mod(prod, letter == 0 ? sigma_ : tau_, orders_);
        for (size_t i = 0; i < k; ++i) {
            long long c = mod_floor_ll(term.coeff, orders_[i]);
            for (size_t j = 0; j < k; ++j)
                acc[i][j] = (acc[i][j] + c * prod[i][j]) % orders_[i];
        }
    }
    reduce_rows(acc, orders_);
    return acc;
}

MatI64 PGroupModule::idempotent_matrix(unsigned j) const {
    size_t k = rank();
    if (m_ == 1) return mat_identity64(k);
    long long expo = exponent();
    if (expo == 1) return MatI64(k, std::vector<long long>(k, 0));
    long long omega = eigenvalue_lift(r_, expo, p_);
    long long minv = mod_inverse_ll(m_, expo);
    long long winv = mod_inverse_ll(omega, expo);
    long long wj = pow_mod_ll(winv, j, expo);
    MatI64 acc(k, std::vector<long long>(k, 0));
    MatI64 tpow = mat_identity64(k);
    long long coeff = 1;
    for (long t = 0; t < m_; ++t) {
        for (size_t i = 0; i < k; ++i) {
            long long c = coeff % orders_[i];
            for (size_t col = 0; col < k; ++col)
                acc[i][col] = (acc[i][col] + c * tpow[i][col]) % orders_[i];
        }
        tpow = mat_mul_mod(tpow, tau_, orders_);
        coeff = coeff * wj % expo;
    }
    for (size_t i = 0; i < k; ++i)
        for (size_t col = 0; col < k; ++col)
            acc[i][col] = acc[i][col] * (minv % orders_[i]) % orders_[i];
    reduce_rows(acc, orders_);
    return acc;
}

Subgroup PGroupModule::make_subgroup(const std::vector<std::vector<long long>>& gens) const {
    size_t k = rank();
    Subgroup s;
    s.orders_ = orders_;
    for (const auto& g : gens) {
        if (g.size() != k) throw std::invalid_argument("subgroup generator dimension mismatch");
        s.gens_.push_back(reduce_element(g));
    }
    if (k == 0) return s;
    MatZ cols(k, std::vector<Integer>(s.gens_.size() + k, 0));
    for (size_t j = 0; j < s.gens_.size(); ++j)
        for (size_t i = 0; i < k; ++i) cols[i][j] = to_integer(s.gens_[j][i]);
    for (size_t i = 0; i < k; ++i) cols[i][s.gens_.size() + i] = to_integer(orders_[i]);
    s.hermite_ = hermite_basis(cols);
    return s;
}

Subgroup PGroupModule::full_subgroup() const {
    std::vector<std::vector<long long>> gens;
    for (size_t i = 0; i < rank(); ++i) {
        std::vector<long long> e(rank(), 0);
        e[i] = 1;
        gens.push_back(e);
    }
    return make_subgroup(gens);
}

Subgroup PGroupModule::trivial_subgroup() const { return make_subgroup({}); }

Subgroup PGroupModule::apply(const GroupRingWord& w, const Subgroup& s) const {
    MatI64 wm = word_matrix(w);
    std::vector<std::vector<long long>> gens;
    for (const auto& g : s.generators()) gens.push_back(apply_matrix(wm, g));
    return make_subgroup(gens);
}

Subgroup PGroupModule::image_matrix(const MatI64& w) const {
    std::vector<std::vector<long long>> gens;
    for (size_t j = 0; j < rank(); ++j) {
        std::vector<long long> col(rank());
        for (size_t i = 0; i < rank(); ++i) col[i] = w[i][j];
        gens.push_back(col);
    }
    return make_subgroup(gens);
}

Subgroup PGroupModule::kernel_matrix(const MatI64& w) const {
    size_t k = rank();
    if (k == 0) return trivial_subgroup();
    MatZ a(k, std::vector<Integer>(2 * k, 0));
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) a[i][j] = to_integer(w[i][j]);
        a[i][k + i] = to_integer(-orders_[i]);
    }
    MatZ kb = kernel_basis(a);
    std::vector<std::vector<long long>> gens;
    for (size_t j = 0; j < (kb.empty() ? 0 : kb[0].size()); ++j) {
        std::vector<long long> g(k);
        for (size_t i = 0; i < k; ++i) {
            Integer v = kb[i][j] % to_integer(orders_[i]);
            if (v < 0) v += to_integer(orders_[i]);
            g[i] = v.get_si();
        }
        gens.push_back(g);
    }
    return make_subgroup(gens);
}

Subgroup PGroupModule::image(const GroupRingWord& w) const { return image_matrix(word_matrix(w)); }

Subgroup PGroupModule::kernel(const GroupRingWord& w) const { return kernel_matrix(word_matrix(w)); }

Subgroup PGroupModule::fixed_subgroup() const {
    return kernel(GroupRingWord::sigma() - GroupRingWord::one());
}

Subgroup PGroupModule::eigenspace(unsigned j) const { return image_matrix(idempotent_matrix(j)); }

std::pair<Subgroup, Subgroup> PGroupModule::plus_minus() const {
    if (m_ != 2) throw std::invalid_argument("plus_minus: requires m = 2");
    return {eigenspace(0), eigenspace(1)};
}

ModuleRestriction PGroupModule::restrict_to(const Subgroup& s) const {
    size_t k = rank();
    if (k == 0) return {PGroupModule(p_, m_, r_, {}, {}, {}), MatI64{}};
    const MatZ& h = s.hermite();
    MatZ x(k, std::vector<Integer>(k, 0));
    for (size_t j = 0; j < k; ++j) {
        std::vector<Integer> target(k, 0), col;
        target[j] = to_integer(orders_[j]);
        if (!hermite_solve(h, target, col)) throw std::logic_error("restrict: bad lattice");
        for (size_t i = 0; i < k; ++i) x[i][j] = col[i];
    }
    auto snf = smith_normal_form(x);
    MatZ hb = mat_mul(h, snf.u_inv);
    std::vector<size_t> kept;
    for (size_t i = 0; i < k; ++i)
        if (snf.diag[i] > 1) kept.push_back(i);
    std::vector<long long> new_orders;
    for (size_t i : kept) new_orders.push_back(snf.diag[i].get_si());

    MatI64 inclusion(k, std::vector<long long>(kept.size(), 0));
    for (size_t jj = 0; jj < kept.size(); ++jj)
        for (size_t i = 0; i < k; ++i) {
            Integer v = hb[i][kept[jj]] % to_integer(orders_[i]);
            if (v < 0) v += to_integer(orders_[i]);
            inclusion[i][jj] = v.get_si();
        }

    auto restrict_map = [&](const MatI64& big) {
        MatI64 out(kept.size(), std::vector<long long>(kept.size(), 0));
        for (size_t jj = 0; jj < kept.size(); ++jj) {
            std::vector<Integer> w(k, 0);
            for (size_t i = 0; i < k; ++i) {
                Integer acc = 0;
                for (size_t t = 0; t < k; ++t) acc += to_integer(big[i][t]) * hb[t][kept[jj]];
                w[i] = acc;
            }
            std::vector<Integer> z;
            if (!hermite_solve(h, w, z)) throw std::logic_error("restrict: image left the lattice");
            std::vector<Integer> y = mat_apply(snf.u, z);
            for (size_t ii = 0; ii < kept.size(); ++ii) {
                Integer v = y[kept[ii]] % to_integer(new_orders[ii]);
                if (v < 0) v += to_integer(new_orders[ii]);
                out[ii][jj] = v.get_si();
            }
        }
        return out;
    };
    PGroupModule sub(p_, m_, r_, new_orders, restrict_map(sigma_), restrict_map(tau_));
    return {std::move(sub), std::move(inclusion)};
}

ModuleQuotient PGroupModule::quotient_by(const Subgroup& s) const {
    size_t k = rank();
    // stability check
    for (const auto& g : s.generators()) {
        if (!s.contains(apply_matrix(sigma_, g)) || !s.contains(apply_matrix(tau_, g)))
            throw std::invalid_argument("quotient_by: subgroup not stable under the action");
    }
    size_t t = s.generators().size();
    MatZ rel(k, std::vector<Integer>(t + k, 0));
    for (size_t j = 0; j < t; ++j)
        for (size_t i = 0; i < k; ++i) rel[i][j] = to_integer(s.generators()[j][i]);
    for (size_t i = 0; i < k; ++i) rel[i][t + i] = to_integer(orders_[i]);
    auto snf = smith_normal_form(rel);
    std::vector<size_t> kept;
    for (size_t i = 0; i < k; ++i) {
        if (snf.diag[i] == 0) throw std::logic_error("quotient: relation matrix rank deficient");
        if (snf.diag[i] > 1) kept.push_back(i);
    }
    std::vector<long long> new_orders;
    for (size_t i : kept) new_orders.push_back(snf.diag[i].get_si());

    MatI64 projection(kept.size(), std::vector<long long>(k, 0));
    for (size_t ii = 0; ii < kept.size(); ++ii)
        for (size_t j = 0; j < k; ++j) {
            Integer v = snf.u[kept[ii]][j] % to_integer(new_orders[ii]);
            if (v < 0) v += to_integer(new_orders[ii]);
            projection[ii][j] = v.get_si();
        }

    auto induce = [&](const MatI64& big) {
        MatZ bigz(k, std::vector<Integer>(k, 0));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) bigz[i][j] = to_integer(big[i][j]);
        MatZ full = mat_mul(mat_mul(snf.u, bigz), snf.u_inv);
        MatI64 out(kept.size(), std::vector<long long>(kept.size(), 0));
        for (size_t ii = 0; ii < kept.size(); ++ii)
            for (size_t jj = 0; jj < kept.size(); ++jj) {
                Integer v = full[kept[ii]][kept[jj]] % to_integer(new_orders[ii]);
                if (v < 0) v += to_integer(new_orders[ii]);
                out[ii][jj] = v.get_si();
            }
        return out;
    };
    PGroupModule q(p_, m_, r_, new_orders, induce(sigma_), induce(tau_));
    return {std::move(q), std::move(projection)};
}

std::vector<std::vector<long long>> PGroupModule::elements(size_t limit) const {
    Integer n = order();
    if (n > static_cast<unsigned long>(limit))
        throw std::invalid_argument("elements: module too large to enumerate");
    size_t total = static_cast<size_t>(n.get_ui());
    std::vector<std::vector<long long>> out;
    out.reserve(total);
    std::vector<long long> cur(rank(), 0);
    for (size_t c = 0; c < total; ++c) {
        out.push_back(cur);
        for (size_t i = 0; i < rank(); ++i) {
            if (++cur[i] < orders_[i]) break;
            cur[i] = 0;
        }
    }
    return out;
}

std::vector<long long> PGroupModule::apply_matrix(const MatI64& m,
                                                  const std::vector<long long>& x) const {
    std::vector<long long> r(rank(), 0);
    for (size_t i = 0; i < rank(); ++i) {
        long long acc = 0;
        for (size_t j = 0; j < rank(); ++j) acc = (acc + m[i][j] * x[j]) % orders_[i];
        r[i] = mod_floor_ll(acc, orders_[i]);
    }
    return r;
}

std::vector<long long> PGroupModule::reduce_element(std::vector<long long> x) const {
    for (size_t i = 0; i < rank(); ++i) x[i] = mod_floor_ll(x[i], orders_[i]);
    return x;
}

// ---------------------------------------------------------------------------
// verification primitives

DecompositionCheck check_dihedral_decomposition(const PGroupModule& mod) {
    if (mod.m() != 2) throw std::invalid_argument("dihedral identity requires m = 2");
    using W = GroupRingWord;
    Subgroup left = mod.image(W::one() - W::sigma());
    Subgroup plus = mod.image(W::one() + W::tau());
    Subgroup mixed = mod.image(W::one() + W::sigma() * W::tau());
    std::vector<std::vector<long long>> gens = plus.generators();
    gens.insert(gens.end(), mixed.generators().begin(), mixed.generators().end());
    Subgroup product = mod.make_subgroup(gens);
    DecompositionCheck out;
    out.contained = product.contains(left);
    out.equal = out.contained && product == left;
    return out;
}

bool verify_dihedral_decomposition(const PGroupModule& mod) {
    return check_dihedral_decomposition(mod).contained;
}

namespace {

void check_map_well_defined(const PGroupModule& from, const PGroupModule& to, const MatI64& f,
                            const char* what) {
    if (f.size() != to.rank())
        throw EquivarianceError(std::string(what) + ": bad row count");
    for (size_t i = 0; i < to.rank(); ++i) {
        if (f[i].size() != from.rank()) throw EquivarianceError(std::string(what) + ": bad shape");
        for (size_t j = 0; j < from.rank(); ++j)
            if ((f[i][j] * from.orders()[j]) % to.orders()[i] != 0)
                throw EquivarianceError(std::string(what) + ": not a well-defined homomorphism");
    }
}

MatI64 compose(const MatI64& a, const MatI64& b, const std::vector<long long>& row_orders) {
    size_t n = a.size(), kk = b.size(), mm = b.empty() ? 0 : b[0].size();
    MatI64 r(n, std::vector<long long>(mm, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < kk; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < mm; ++j)
                r[i][j] = (r[i][j] + a[i][t] % row_orders[i] * (b[t][j] % row_orders[i])) %
                          row_orders[i];
        }
    for (size_t i = 0; i < n; ++i)
        for (auto& x : r[i]) x = mod_floor_ll(x, row_orders[i]);
    return r;
}

Subgroup map_image(const PGroupModule& to, const MatI64& f, const Subgroup& src) {
    std::vector<std::vector<long long>> gens;
    for (const auto& g : src.generators()) {
        std::vector<long long> img(to.rank(), 0);
        for (size_t i = 0; i < to.rank(); ++i) {
            long long acc = 0;
            for (size_t j = 0; j < g.size(); ++j)
                acc = (acc + f[i][j] % to.orders()[i] * (g[j] % to.orders()[i])) % to.orders()[i];
            img[i] = mod_floor_ll(acc, to.orders()[i]);
        }
        gens.push_back(img);
    }
    return to.make_subgroup(gens);
}

Subgroup map_kernel(const PGroupModule& from, const PGroupModule& to, const MatI64& f) {
    size_t ka = from.rank(), kb = to.rank();
    if (ka == 0) return from.trivial_subgroup();
    if (kb == 0) return from.full_subgroup();  // everything maps to the trivial module
    MatZ a(kb, std::vector<Integer>(ka + kb, 0));
    for (size_t i = 0; i < kb; ++i) {
        for (size_t j = 0; j < ka; ++j) a[i][j] = to_integer(f[i][j]);
        a[i][ka + i] = to_integer(-to.orders()[i]);
    }
    MatZ kbas = kernel_basis(a);
    std::vector<std::vector<long long>> gens;
    for (size_t j = 0; j < (kbas.empty() ? 0 : kbas[0].size()); ++j) {
        std::vector<long long> g(ka);
        for (size_t i = 0; i < ka; ++i) {
            Integer v = kbas[i][j] % to_integer(from.orders()[i]);
            if (v < 0) v += to_integer(from.orders()[i]);
            g[i] = v.get_si();
        }
        gens.push_back(g);
    }
    return from.make_subgroup(gens);
}

}  // namespace

bool verify_twisted_exactness(const PGroupModule& a, const PGroupModule& b, const PGroupModule& c,
                              const MatI64& iota, const MatI64& pi) {
    if (a.p() != b.p() || b.p() != c.p() || a.m() != b.m() || b.m() != c.m() || a.r() != b.r() ||
        b.r() != c.r())
        throw std::invalid_argument("twisted exactness: incompatible module parameters");
    check_map_well_defined(a, b, iota, "iota");
    check_map_well_defined(b, c, pi, "pi");
    // iota is tau-equivariant
    MatI64 lhs = compose(iota, a.tau_matrix(), b.orders());
    MatI64 rhs = compose(b.tau_matrix(), iota, b.orders());
    if (lhs != rhs) throw EquivarianceError("iota is not tau-equivariant");
    // pi is twisted: pi tau_B = s (tau_C pi)
    long long expc = c.exponent();
    long long s = 1;
    if (c.rank() > 0 && expc > 1 && c.m() > 1)
        s = mod_inverse_ll(eigenvalue_lift(c.r(), expc, c.p()), expc);
    MatI64 l2 = compose(pi, b.tau_matrix(), c.orders());
    MatI64 r2 = compose(c.tau_matrix(), pi, c.orders());
    for (size_t i = 0; i < c.rank(); ++i)
        for (auto& x : r2[i]) x = x * (s % c.orders()[i]) % c.orders()[i];
    if (l2 != r2) throw EquivarianceError("pi is not s-twisted equivariant");

    // exactness of 1 -> A -> B -> C -> 1
    if (!map_kernel(a, b, iota).is_trivial()) return false;
    if (!(map_image(c, pi, b.full_subgroup()) == c.full_subgroup())) return false;
    Subgroup ker_pi = map_kernel(b, c, pi);
    Subgroup im_iota = map_image(b, iota, a.full_subgroup());
    if (!(ker_pi == im_iota)) return false;

    // eigenspace sequences 1 -> A(j) -> B(j) -> C(j+1) -> 1
    for (long j = 0; j < a.m(); ++j) {
        Subgroup aj = a.eigenspace(static_cast<unsigned>(j));
        Subgroup bj = b.eigenspace(static_cast<unsigned>(j));
        Subgroup cj1 = c.eigenspace(static_cast<unsigned>((j + 1) % a.m()));
        Subgroup iota_aj = map_image(b, iota, aj);
        if (!bj.contains(iota_aj)) return false;
        if (!(map_image(c, pi, bj) == cj1)) return false;
        if (aj.order() * cj1.order() != bj.order()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// structure prediction for sigma-actions with #A^G = p

namespace {

// (Z/p^{alpha+1})^beta x (Z/p^alpha)^{p-1-beta} as a cyclic-order list
std::vector<long long> lambda_adic_shape(long p, unsigned c) {
    unsigned alpha = c / static_cast<unsigned>(p - 1);
    unsigned beta = c % static_cast<unsigned>(p - 1);
    std::vector<long long> shape;
    for (unsigned i = 0; i < beta; ++i) shape.push_back(ipow_ll(p, alpha + 1));
    if (alpha > 0)
        for (unsigned i = 0; i < static_cast<unsigned>(p - 1) - beta; ++i)
            shape.push_back(ipow_ll(p, alpha));
    return shape;
}

AbelianGroupStructure shape_to_structure(const std::vector<long long>& shape) {
    std::vector<Integer> v;
    for (long long d : shape) v.push_back(to_integer(d));
    return AbelianGroupStructure::from_cyclic_orders(v);
}

}  // namespace

GrasAnalysis gras_analyze(const PGroupModule& mod) {
    using W = GroupRingWord;
    long p = mod.p();
    if (mod.fixed_subgroup().order() != p)
        throw std::invalid_argument("gras_analyze: requires #A^G = p");
    GrasAnalysis out;
    W step = W::sigma() - W::one();
    Subgroup s = mod.full_subgroup();
    unsigned n = 0;
    while (!s.is_trivial()) {
        s = mod.apply(step, s);
        ++n;
        if (n > 64) throw std::logic_error("gras_analyze: (sigma-1)-filtration did not vanish");
    }
    out.n = n;
    if (mod.order() != ipow(to_integer(p), n))
        throw std::logic_error("gras_analyze: #A != p^n despite #A^G = p");
    Subgroup anu = mod.image(W::sigma_power_sum(p));
    out.nu_trivial = anu.is_trivial();
    if (out.nu_trivial) {
        out.predicted = shape_to_structure(lambda_adic_shape(p, n));
        return out;
    }
    if (anu.order() != p) throw std::logic_error("gras_analyze: #A^nu not in {1, p}");
    // glue depth: largest t with A^nu <= p^t A
    unsigned e = 0;
    long long pt = 1;
    while (pt * p <= mod.exponent()) {
        pt *= p;
        Subgroup pa = mod.image(W::scalar(pt));
        bool inside = true;
        for (const auto& g : anu.generators())
            if (!pa.contains(g)) {
                inside = false;
                break;
            }
        if (!inside) break;
        ++e;
    }
    out.glue_depth = e;
    std::vector<long long> shape = lambda_adic_shape(p, n - 1);
    if (e == 0) {
        shape.push_back(p);
    } else {
        long long target = ipow_ll(p, e);
        auto it = std::find(shape.begin(), shape.end(), target);
        if (it == shape.end())
            throw std::logic_error("gras_analyze: glue depth incompatible with lambda-adic part");
        *it = target * p;
    }
    out.predicted = shape_to_structure(shape);
    return out;
}

AbelianGroupStructure gras_structure(const PGroupModule& mod) { return gras_analyze(mod).predicted; }

// ---------------------------------------------------------------------------
// deterministic generators

PGroupModule random_sigma_module_with_prime_fixed(long p, std::mt19937_64& rng, int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        size_t k = 1 + rng() % 3;
        std::vector<long long> orders(k);
        unsigned total = 0;
        for (auto& d : orders) {
            unsigned e = 1 + static_cast<unsigned>(rng() % 3);
            total += e;
            d = ipow_ll(p, e);
        }
        if (total > 6) continue;
        MatI64 sigma = mat_identity64(k);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) {
                long long step = orders[i] / std::gcd(orders[i], orders[j]);
                long long nvals = orders[i] / step;
                long long v = step * static_cast<long long>(rng() % static_cast<unsigned long long>(nvals));
                sigma[i][j] = (sigma[i][j] + v) % orders[i];
            }
        MatI64 sp = mat_identity64(k);
        for (long i = 0; i < p; ++i) sp = mat_mul_mod(sp, sigma, orders);
        if (!mat_equal(sp, mat_identity64(k))) continue;
        PGroupModule cand(p, 1, 1, orders, sigma, mat_identity64(k));
        if (cand.fixed_subgroup().order() != p) continue;
        return cand;
    }
    throw std::runtime_error("random module generation exhausted its attempt budget");
}

namespace {

struct BlockSpec {
    std::vector<long long> orders;
    MatI64 sigma, tau;
};

BlockSpec pair_block(long p, unsigned t) {
    long long d = ipow_ll(p, t);
    BlockSpec b;
    b.orders = {d, d};
    b.sigma = {{1, d / p}, {0, 1}};
    b.tau = {{1, 0}, {0, d - 1}};
    return b;
}

BlockSpec regular_block(long p, unsigned t, bool negate_tau) {
    long long d = ipow_ll(p, t);
    size_t k = static_cast<size_t>(p);
    BlockSpec b;
    b.orders.assign(k, d);
    b.sigma.assign(k, std::vector<long long>(k, 0));
    b.tau.assign(k, std::vector<long long>(k, 0));
    for (size_t i = 0; i < k; ++i) {
        b.sigma[(i + 1) % k][i] = 1;
        b.tau[(k - i) % k][i] = negate_tau ? d - 1 : 1;
    }
    return b;
}

BlockSpec scalar_block(long p, unsigned t, bool negate_tau) {
    long long d = ipow_ll(p, t);
    return {{d}, {{1}}, {{negate_tau ? d - 1 : 1}}};
}

BlockSpec direct_sum(const BlockSpec& x, const BlockSpec& y) {
    BlockSpec b;
    b.orders = x.orders;
    b.orders.insert(b.orders.end(), y.orders.begin(), y.orders.end());
    size_t k = b.orders.size(), kx = x.orders.size();
    b.sigma.assign(k, std::vector<long long>(k, 0));
    b.tau.assign(k, std::vector<long long>(k, 0));
    for (size_t i = 0; i < kx; ++i)
        for (size_t j = 0; j < kx; ++j) {
            b.sigma[i][j] = x.sigma[i][j];
            b.tau[i][j] = x.tau[i][j];
        }
    for (size_t i = kx; i < k; ++i)
        for (size_t j = kx; j < k; ++j) {
            b.sigma[i][j] = y.sigma[i - kx][j - kx];
            b.tau[i][j] = y.tau[i - kx][j - kx];
        }
    return b;
}

// random automorphism conjugation, tracked with its inverse
void conjugate_in_place(BlockSpec& b, std::mt19937_64& rng, int ops) {
    size_t k = b.orders.size();
    MatI64 u = mat_identity64(k), uinv = mat_identity64(k);
    for (int o = 0; o < ops; ++o) {
        size_t i = rng() % k, j = rng() % k;
        int kind = static_cast<int>(rng() % 3);
        if (kind == 0 && i != j) {
            long long step = b.orders[i] / std::gcd(b.orders[i], b.orders[j]);
            long long nvals = b.orders[i] / step;
            long long c = step * static_cast<long long>(rng() % static_cast<unsigned long long>(nvals));
            if (c == 0) continue;
            MatI64 e = mat_identity64(k), einv = mat_identity64(k);
            e[i][j] = c;
            einv[i][j] = (b.orders[i] - c) % b.orders[i];
            u = mat_mul_mod(e, u, b.orders);
            uinv = mat_mul_mod(uinv, einv, b.orders);
        } else if (kind == 1) {
            long long d = b.orders[i];
            long long c = 1 + static_cast<long long>(rng() % static_cast<unsigned long long>(d - 1));
            if (std::gcd(c, d) != 1) continue;
            MatI64 e = mat_identity64(k), einv = mat_identity64(k);
            e[i][i] = c;
            einv[i][i] = mod_inverse_ll(c, d);
            u = mat_mul_mod(e, u, b.orders);
            uinv = mat_mul_mod(uinv, einv, b.orders);
        } else if (kind == 2 && i != j && b.orders[i] == b.orders[j]) {
            MatI64 e = mat_identity64(k);
            std::swap(e[i], e[j]);
            u = mat_mul_mod(e, u, b.orders);
            uinv = mat_mul_mod(uinv, e, b.orders);
        }
    }
    b.sigma = mat_mul_mod(mat_mul_mod(u, b.sigma, b.orders), uinv, b.orders);
    b.tau = mat_mul_mod(mat_mul_mod(u, b.tau, b.orders), uinv, b.orders);
}

}  // namespace

PGroupModule random_dihedral_module(long p, std::mt19937_64& rng) {
    unsigned budget = 6;  // total exponent of the order
    BlockSpec acc;
    bool first = true;
    int blocks = 1 + static_cast<int>(rng() % 2);
    for (int bi = 0; bi < blocks; ++bi) {
        BlockSpec blk;
        switch (rng() % 4) {
            case 0: {
                unsigned t = 1 + static_cast<unsigned>(rng() % 2);
                if (2 * t > budget) t = 1;
                if (2 * t > budget) continue;
                blk = pair_block(p, t);
                budget -= 2 * t;
                break;
            }
            case 1: {
                if (static_cast<unsigned>(p) > budget) continue;
                blk = regular_block(p, 1, rng() % 2 == 0);
                budget -= static_cast<unsigned>(p);
                break;
            }
            default: {
                unsigned t = 1 + static_cast<unsigned>(rng() % 2);
                if (t > budget) t = 1;
                if (t > budget) continue;
                blk = scalar_block(p, t, rng() % 2 == 0);
                budget -= t;
                break;
            }
        }
        acc = first ? blk : direct_sum(acc, blk);
        first = false;
    }
    if (first) acc = scalar_block(p, 1, rng() % 2 == 0);
    conjugate_in_place(acc, rng, 3 + static_cast<int>(rng() % 6));
    return PGroupModule(p, 2, p - 1, acc.orders, acc.sigma, acc.tau);
}

std::vector<PGroupModule> small_dihedral_modules(long p, long long max_order) {
    std::vector<PGroupModule> out;
    auto push = [&](const BlockSpec& b) {
        Integer n = 1;
        for (long long d : b.orders) n *= to_integer(d);
        if (n > to_integer(max_order)) return;
        out.emplace_back(p, 2, p - 1, b.orders, b.sigma, b.tau);
    };

    // rank 1: sigma is forced trivial, tau = +-1
    for (unsigned t = 1; ipow_ll(p, t) <= max_order; ++t) {
        push(scalar_block(p, t, false));
        push(scalar_block(p, t, true));
    }

    // rank 2: exhaustive search over valid (sigma, tau) pairs
    for (unsigned e1 = 1; ipow_ll(p, e1) <= max_order; ++e1)
        for (unsigned e2 = 1; e2 <= e1 && ipow_ll(p, e1 + e2) <= max_order; ++e2) {
            std::vector<long long> orders = {ipow_ll(p, e1), ipow_ll(p, e2)};
            auto entries = [&](size_t i, size_t j) {
                long long step = orders[i] / std::gcd(orders[i], orders[j]);
                std::vector<long long> vals;
                for (long long v = 0; v < orders[i]; v += step) vals.push_back(v);
                return vals;
            };
            std::vector<MatI64> sigmas;
            for (long long a : entries(0, 0))
                for (long long b : entries(0, 1))
                    for (long long c : entries(1, 0))
                        for (long long d : entries(1, 1)) {
                            MatI64 s = {{a, b}, {c, d}};
                            MatI64 sp = mat_identity64(2);
                            for (long i = 0; i < p; ++i) sp = mat_mul_mod(sp, s, orders);
                            if (mat_equal(sp, mat_identity64(2))) sigmas.push_back(s);
                        }
            for (const MatI64& s : sigmas) {
                // sigma^{-1} = sigma^{p-1}
                MatI64 sinv = mat_identity64(2);
                for (long i = 0; i < p - 1; ++i) sinv = mat_mul_mod(sinv, s, orders);
                for (long long a : entries(0, 0))
                    for (long long b : entries(0, 1))
                        for (long long c : entries(1, 0))
                            for (long long d : entries(1, 1)) {
                                MatI64 t = {{a, b}, {c, d}};
                                MatI64 t2 = mat_mul_mod(t, t, orders);
                                if (!mat_equal(t2, mat_identity64(2))) continue;
                                MatI64 lhs = mat_mul_mod(mat_mul_mod(t, s, orders), t, orders);
                                if (!mat_equal(lhs, sinv)) continue;
                                push({orders, s, t});
                            }
            }
        }

    // higher rank: structured blocks and their direct sums
    std::vector<BlockSpec> seeds;
    if (ipow_ll(p, p) <= max_order) {
        seeds.push_back(regular_block(p, 1, false));
        seeds.push_back(regular_block(p, 1, true));
    }
    for (unsigned t = 1; ipow_ll(p, 2 * t) <= max_order; ++t) seeds.push_back(pair_block(p, t));
    for (const auto& sd : seeds) {
        push(sd);
        for (unsigned t = 1; t <= 2; ++t) {
            push(direct_sum(sd, scalar_block(p, t, false)));
            push(direct_sum(sd, scalar_block(p, t, true)));
        }
        for (const auto& sd2 : seeds) push(direct_sum(sd, sd2));
    }
    std::mt19937_64 rng(0xD1AE5u);
    for (int i = 0; i < 50; ++i) {
        BlockSpec b = seeds.empty() ? pair_block(p, 1) : seeds[rng() % seeds.size()];
        conjugate_in_place(b, rng, 4);
        push(b);
    }
    return out;
}

}  // namespace dihlab
