// Binary BCH(127, 64, t = 10) over GF(2^7), primitive polynomial x^7 + x^3 + 1.
// Parity-check column j is x^j mod g(x), so the syndrome of a block b is the
// remainder b(x) mod g(x) and the decoder can recover power sums from it.

#include <array>
#include <set>
#include <stdexcept>

#include "rislab/reconcile.hpp"

namespace rislab {
namespace {

constexpr int kM = 7;
constexpr int kN = (1 << kM) - 1;
constexpr unsigned kPrimitive = 0x89;  // x^7 + x^3 + 1

struct Gf128 {
    std::array<int, 2 * kN> exp{};
    std::array<int, kN + 1> log{};

    Gf128() {
        unsigned x = 1;
        for (int i = 0; i < kN; ++i) {
            exp[i] = static_cast<int>(x);
            log[x] = i;
            x <<= 1;
            if (x & (1U << kM)) x ^= kPrimitive;
        }
        for (int i = kN; i < 2 * kN; ++i) exp[i] = exp[i - kN];
    }

    int mul(int a, int b) const { return (a == 0 || b == 0) ? 0 : exp[log[a] + log[b]]; }
    int div(int a, int b) const { return a == 0 ? 0 : exp[(log[a] - log[b] + kN) % kN]; }
    int pow_alpha(long e) const { return exp[((e % kN) + kN) % kN]; }
};

const Gf128& field() {
    static const Gf128 f;
    return f;
}

using Poly2 = std::vector<std::uint8_t>;  // GF(2) coefficients, lowest degree first

Poly2 mul2(const Poly2& a, const Poly2& b) {
    Poly2 r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= b[j];
    return r;
}

// Minimal polynomial of α^i: product over its cyclotomic coset.
Poly2 minimal_polynomial(int i) {
    const Gf128& f = field();
    std::set<int> coset;
    for (int e = i % kN; !coset.contains(e); e = (2 * e) % kN) coset.insert(e);
    std::vector<int> p{1};  // GF(128) coefficients
    for (int e : coset) {
        const int root = f.exp[e];
        std::vector<int> q(p.size() + 1, 0);
        for (std::size_t d = 0; d < p.size(); ++d) {
            q[d + 1] ^= p[d];
            q[d] ^= f.mul(p[d], root);
        }
        p = q;
    }
    Poly2 out(p.size());
    for (std::size_t d = 0; d < p.size(); ++d) {
        if (p[d] > 1) throw std::logic_error("minimal polynomial not binary");
        out[d] = static_cast<std::uint8_t>(p[d]);
    }
    return out;
}

Poly2 generator(int t) {
    Poly2 g{1};
    std::set<int> used;
    for (int i = 1; i <= 2 * t; ++i) {
        if (used.contains(i)) continue;
        for (int e = i; !used.contains(e); e = (2 * e) % kN) used.insert(e);
        g = mul2(g, minimal_polynomial(i));
    }
    return g;
}

class BchDecoder final : public SyndromeDecoder {
public:
    explicit BchDecoder(int t) : t_(t) {}

    std::optional<Bits> error_pattern(std::span<const std::uint8_t> r) const override {
        const Gf128& f = field();
        std::vector<int> s(static_cast<std::size_t>(2 * t_ + 1), 0);
        bool any = false;
        for (int i = 1; i <= 2 * t_; ++i) {
            int acc = 0;
            for (std::size_t l = 0; l < r.size(); ++l)
                if (r[l]) acc ^= f.pow_alpha(static_cast<long>(i) * static_cast<long>(l));
            s[static_cast<std::size_t>(i)] = acc;
            any = any || acc != 0;
        }
        Bits e(kN, 0);
        if (!any) return e;

        // Berlekamp-Massey
        std::vector<int> c{1};
        std::vector<int> b{1};
        int len = 0;
        int shift = 1;
        int bd = 1;
        for (int n = 0; n < 2 * t_; ++n) {
            int d = s[static_cast<std::size_t>(n + 1)];
            for (int i = 1; i <= len && i < static_cast<int>(c.size()); ++i)
                d ^= f.mul(c[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(n + 1 - i)]);
            if (d == 0) {
                ++shift;
                continue;
            }
            const int coef = f.div(d, bd);
            std::vector<int> next = c;
            if (next.size() < b.size() + static_cast<std::size_t>(shift))
                next.resize(b.size() + static_cast<std::size_t>(shift), 0);
            for (std::size_t i = 0; i < b.size(); ++i)
                next[i + static_cast<std::size_t>(shift)] ^= f.mul(coef, b[i]);
            if (2 * len <= n) {
                b = c;
                len = n + 1 - len;
                bd = d;
                shift = 1;
            } else {
                ++shift;
            }
            c = std::move(next);
        }
        if (len > t_) return std::nullopt;
        c.resize(static_cast<std::size_t>(len + 1), 0);

        // Chien search: position j is in error iff Λ(α^-j) = 0
        int roots = 0;
        for (int j = 0; j < kN; ++j) {
            int acc = 0;
            for (int l = 0; l <= len; ++l)
                if (c[static_cast<std::size_t>(l)])
                    acc ^= f.exp[(f.log[c[static_cast<std::size_t>(l)]] +
                                  ((kN - j) * l) % kN) % kN];
            if (acc == 0) {
                e[static_cast<std::size_t>(j)] = 1;
                ++roots;
            }
        }
        if (roots != len) return std::nullopt;
        return e;
    }

private:
    int t_;
};

}  // namespace

BlockCodeSpec bch127_64() {
    constexpr int t = 10;
    const Poly2 g = generator(t);
    const int r = static_cast<int>(g.size()) - 1;  // n - k
    BlockCodeSpec code;
    code.name = "bch127_64";
    code.n = kN;
    code.k = kN - r;
    code.t = t;
    code.parity_check.assign(static_cast<std::size_t>(r), Bits(kN, 0));
    Poly2 rem(static_cast<std::size_t>(r), 0);
    rem[0] = 1;
    for (int j = 0; j < kN; ++j) {
        for (int i = 0; i < r; ++i) code.parity_check[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rem[static_cast<std::size_t>(i)];
        // rem <- rem·x mod g
        const std::uint8_t carry = rem[static_cast<std::size_t>(r - 1)];
        for (int i = r - 1; i > 0; --i) rem[static_cast<std::size_t>(i)] = rem[static_cast<std::size_t>(i - 1)];
        rem[0] = 0;
        if (carry)
            for (int i = 0; i < r; ++i) rem[static_cast<std::size_t>(i)] ^= g[static_cast<std::size_t>(i)];
    }
    code.decoder = std::make_shared<BchDecoder>(t);
    finalize_code(code);
    return code;
}

}  // namespace rislab
