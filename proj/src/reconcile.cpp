#include "rislab/reconcile.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace rislab {
namespace {

constexpr std::uint64_t kConfirmationSeedBase = 0x6b65792d636f6e66ULL;

std::vector<std::uint64_t> pack(std::span<const std::uint8_t> bits) {
    std::vector<std::uint64_t> w((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) w[i / 64] |= 1ULL << (i % 64);
    return w;
}

std::uint64_t pack_small(std::span<const std::uint8_t> bits) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) w |= 1ULL << i;
    return w;
}

class TableDecoder final : public SyndromeDecoder {
public:
    TableDecoder(const std::vector<Bits>& h, int n, int t) : n_(n) {
        if (h.size() > 64) throw std::domain_error("table decoder: too many parity rows");
        BlockCodeSpec tmp;
        tmp.n = n;
        tmp.k = n - static_cast<int>(h.size());
        tmp.parity_check = h;
        Bits e(static_cast<std::size_t>(n), 0);
        // enumerate by increasing weight so the lowest-weight pattern wins
        for (int w = 0; w <= t; ++w) enumerate(tmp, e, 0, w);
    }

    std::optional<Bits> error_pattern(std::span<const std::uint8_t> d) const override {
        const auto it = table_.find(pack_small(d));
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }

private:
    void enumerate(const BlockCodeSpec& c, Bits& e, int from, int left) {
        if (left == 0) {
            table_.try_emplace(pack_small(syndrome(e, c)), e);
            return;
        }
        for (int i = from; i < n_; ++i) {
            e[static_cast<std::size_t>(i)] = 1;
            enumerate(c, e, i + 1, left - 1);
            e[static_cast<std::size_t>(i)] = 0;
        }
    }

    int n_;
    std::unordered_map<std::uint64_t, Bits> table_;
};

}  // namespace

std::size_t gf2_rank(std::vector<Bits> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && !rows[piv][c]) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r][c])
                for (std::size_t j = 0; j < cols; ++j) rows[r][j] ^= rows[rank][j];
        ++rank;
    }
    return rank;
}

void finalize_code(BlockCodeSpec& code) {
    if (!(0 < code.k && code.k < code.n)) throw std::domain_error("block code: need 0 < k < n");
    if (code.parity_check.size() != static_cast<std::size_t>(code.n - code.k))
        throw std::domain_error("block code: parity check must have n-k rows");
    for (const auto& row : code.parity_check)
        if (row.size() != static_cast<std::size_t>(code.n))
            throw std::domain_error("block code: parity check rows must have n columns");
    if (gf2_rank(code.parity_check) != code.parity_check.size())
        throw std::domain_error("block code: parity check is not full row rank");
    code.packed_rows.clear();
    for (const auto& row : code.parity_check) {
        auto w = pack(row);
        code.packed_rows.insert(code.packed_rows.end(), w.begin(), w.end());
    }
}

BlockCodeSpec make_table_code(std::string name, std::vector<Bits> parity_check, int t) {
    BlockCodeSpec code;
    code.name = std::move(name);
    code.n = parity_check.empty() ? 0 : static_cast<int>(parity_check[0].size());
    code.k = code.n - static_cast<int>(parity_check.size());
    code.t = t;
    code.parity_check = std::move(parity_check);
    finalize_code(code);
    code.decoder = std::make_shared<TableDecoder>(code.parity_check, code.n, t);
    return code;
}

BlockCodeSpec hamming74() {
    // column j holds the binary expansion of j+1
    std::vector<Bits> h(3, Bits(7, 0));
    for (int j = 0; j < 7; ++j)
        for (int i = 0; i < 3; ++i) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ((j + 1) >> i) & 1;
    return make_table_code("hamming74", std::move(h), 1);
}

Bits syndrome(std::span<const std::uint8_t> block, const BlockCodeSpec& code) {
    if (block.size() != static_cast<std::size_t>(code.n))
        throw std::domain_error("syndrome: block length != n");
    const std::size_t r = code.parity_check.size();
    Bits s(r, 0);
    if (!code.packed_rows.empty()) {
        const auto x = pack(block);
        const std::size_t words = x.size();
        for (std::size_t i = 0; i < r; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t w = 0; w < words; ++w) acc ^= code.packed_rows[i * words + w] & x[w];
            s[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
        }
        return s;
    }
    for (std::size_t i = 0; i < r; ++i) {
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < block.size(); ++j) acc ^= code.parity_check[i][j] & block[j];
        s[i] = acc;
    }
    return s;
}

std::optional<Bits> reconcile_block(std::span<const std::uint8_t> block_B,
                                    std::span<const std::uint8_t> syndrome_A,
                                    const BlockCodeSpec& code) {
    if (syndrome_A.size() != static_cast<std::size_t>(code.n - code.k))
        throw std::domain_error("reconcile_block: syndrome length != n-k");
    Bits diff = syndrome(block_B, code);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] ^= syndrome_A[i];
    const auto e = code.decoder->error_pattern(diff);
    if (!e) return std::nullopt;
    Bits out(block_B.begin(), block_B.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= (*e)[i];
    // bounded-distance decoders can miscorrect into a different coset; reject those
    const Bits check = syndrome(out, code);
    if (!std::equal(check.begin(), check.end(), syndrome_A.begin())) return std::nullopt;
    return out;
}

ToeplitzSeed random_toeplitz_seed(std::size_t n, std::size_t m, Rng& rng) {
    ToeplitzSeed s;
    s.first_row.resize(n);
    s.first_col.resize(m);
    std::uint64_t word = 0;
    std::size_t used = 64;
    auto next = [&]() -> std::uint8_t {
        if (used == 64) {
            word = rng.bits();
            used = 0;
        }
        return static_cast<std::uint8_t>((word >> used++) & 1U);
    };
    for (auto& b : s.first_row) b = next();
    for (std::size_t i = 1; i < m; ++i) s.first_col[i] = next();
    if (m > 0 && n > 0) s.first_col[0] = s.first_row[0];
    return s;
}

Bits privacy_amplify(std::span<const std::uint8_t> bits, const ToeplitzSeed& seed, std::size_t m) {
    const std::size_t n = bits.size();
    if (m > n) throw std::domain_error("privacy_amplify: output longer than input");
    if (m == 0) return {};
    if (seed.first_row.size() != n || seed.first_col.size() != m)
        throw std::domain_error("privacy_amplify: seed dimensions do not match");
    // Diagonal sequence s[j - i + m - 1] = T[i][j]; row i is the window s[m-1-i, m-1-i+n).
    Bits diag(n + m - 1);
    for (std::size_t d = 0; d < n; ++d) diag[d + m - 1] = seed.first_row[d];
    for (std::size_t d = 1; d < m; ++d) diag[m - 1 - d] = seed.first_col[d];
    const auto s = pack(diag);
    const auto x = pack(bits);
    const std::size_t words = x.size();
    const std::size_t tail = n % 64;
    const std::uint64_t last_mask = tail == 0 ? ~0ULL : ((1ULL << tail) - 1);
    Bits out(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t off = m - 1 - i;
        const std::size_t q = off / 64;
        const unsigned r = static_cast<unsigned>(off % 64);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t win = s[q + w] >> r;
            if (r != 0 && q + w + 1 < s.size()) win |= s[q + w + 1] << (64 - r);
            if (w + 1 == words) win &= last_mask;
            acc ^= win & x[w];
        }
        out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
    }
    return out;
}

std::size_t leakage_budget(std::size_t n_total, const BlockCodeSpec& code, std::size_t n_blocks,
                           std::size_t safety_bits) {
    if (n_total != n_blocks * static_cast<std::size_t>(code.n))
        throw std::domain_error("leakage_budget: n_total != n_blocks * n");
    const std::size_t spent = n_blocks * static_cast<std::size_t>(code.n - code.k) + safety_bits;
    return n_total > spent ? n_total - spent : 0;
}

std::size_t confirmation_bits(const BlockCodeSpec& code) {
    return std::min(static_cast<std::size_t>(code.n), kConfirmationBits);
}

ToeplitzSeed confirmation_seed(std::size_t n, std::size_t bits) {
    if (bits == n) {
        ToeplitzSeed id;
        id.first_row.assign(n, 0);
        id.first_col.assign(n, 0);
        if (n > 0) id.first_row[0] = id.first_col[0] = 1;
        return id;
    }
    Rng rng(mix_seed(kConfirmationSeedBase, n));
    return random_toeplitz_seed(n, bits, rng);
}

std::uint32_t confirmation_hash(std::span<const std::uint8_t> block, const ToeplitzSeed& seed) {
    const Bits h = privacy_amplify(block, seed, seed.first_col.size());
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < h.size(); ++i) v |= static_cast<std::uint32_t>(h[i]) << i;
    return v;
}

const char* to_string(PublicKind k) {
    switch (k) {
        case PublicKind::retained_indices: return "retained_indices";
        case PublicKind::interleaver_seed: return "interleaver_seed";
        case PublicKind::syndrome: return "syndrome";
        case PublicKind::confirmation_hash: return "confirmation_hash";
        case PublicKind::block_decision: return "block_decision";
        case PublicKind::toeplitz_seed: return "toeplitz_seed";
    }
    return "?";
}

std::size_t Transcript::total_bits() const {
    std::size_t t = 0;
    for (const auto& it : items) t += it.bits;
    return t;
}

std::size_t Transcript::bits_of(PublicKind kind) const {
    std::size_t t = 0;
    for (const auto& it : items)
        if (it.kind == kind) t += it.bits;
    return t;
}

std::vector<std::size_t> interleaver(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(
            boost::random::uniform_int_distribution<std::uint64_t>(0, i - 1)(rng));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

KeyAgreement agree_keys(std::span<const std::uint8_t> in_raw_A, std::span<const std::uint8_t> in_raw_B,
                        const BlockCodeSpec& code, const AgreementOptions& opt, Rng& public_rng,
                        Transcript& transcript) {
    if (in_raw_A.size() != in_raw_B.size()) throw std::domain_error("agree_keys: raw keys differ in length");
    if (opt.batch_blocks == 0) throw std::domain_error("agree_keys: batch_blocks must be >= 1");
    const auto n = static_cast<std::size_t>(code.n);
    const std::size_t n_blocks = in_raw_A.size() / n;
    const std::size_t hash_bits = confirmation_bits(code);
    const ToeplitzSeed confirm = confirmation_seed(n, hash_bits);

    KeyAgreement out;
    Bits shuffled_A;
    Bits shuffled_B;
    std::span<const std::uint8_t> raw_A = in_raw_A;
    std::span<const std::uint8_t> raw_B = in_raw_B;
    if (opt.interleave) {
        out.interleaver_seed = public_rng.bits();
        transcript.add(PublicKind::interleaver_seed, 64);
        const auto perm = interleaver(in_raw_A.size(), *out.interleaver_seed);
        shuffled_A.resize(perm.size());
        shuffled_B.resize(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            shuffled_A[i] = in_raw_A[perm[i]];
            shuffled_B[i] = in_raw_B[perm[i]];
        }
        raw_A = shuffled_A;
        raw_B = shuffled_B;
    }
    out.blocks.resize(n_blocks);
    std::vector<Bits> agreed_B(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const auto a = raw_A.subspan(b * n, n);
        const auto bb = raw_B.subspan(b * n, n);
        BlockRecord& rec = out.blocks[b];
        rec.syndrome_A = syndrome(a, code);
        transcript.add(PublicKind::syndrome, rec.syndrome_A.size(), static_cast<std::int64_t>(b));
        auto fixed = reconcile_block(bb, rec.syndrome_A, code);
        rec.decoded = fixed.has_value();
        rec.hash_A = confirmation_hash(a, confirm);
        transcript.add(PublicKind::confirmation_hash, hash_bits, static_cast<std::int64_t>(b));
        rec.confirmed = rec.decoded && confirmation_hash(*fixed, confirm) == rec.hash_A;
        transcript.add(PublicKind::block_decision, 1, static_cast<std::int64_t>(b));
        if (rec.confirmed) agreed_B[b] = std::move(*fixed);
        else ++out.blocks_failed;
    }
    out.leakage_bits = n_blocks * (static_cast<std::size_t>(code.n - code.k) + hash_bits);

    std::vector<std::size_t> confirmed;
    for (std::size_t b = 0; b < n_blocks; ++b)
        if (out.blocks[b].confirmed) confirmed.push_back(b);

    const double share = std::clamp(opt.secret_fraction, 0.0, 1.0);
    Bits in_A;
    Bits in_B;
    for (std::size_t start = 0; start < confirmed.size(); start += opt.batch_blocks) {
        BatchRecord batch;
        const std::size_t stop = std::min(confirmed.size(), start + opt.batch_blocks);
        batch.blocks.assign(confirmed.begin() + static_cast<std::ptrdiff_t>(start),
                            confirmed.begin() + static_cast<std::ptrdiff_t>(stop));
        const std::size_t nb = batch.blocks.size();
        const std::size_t n_total = nb * n;
        batch.m = leakage_budget(n_total, code, nb, opt.safety_bits + nb * hash_bits);
        // never emit more than the estimated shared secrecy of the input
        const auto cap = static_cast<std::size_t>(std::floor(share * static_cast<double>(n_total)));
        batch.m = std::min(batch.m, cap > opt.safety_bits ? cap - opt.safety_bits : 0);
        if (batch.m == 0) continue;
        in_A.clear();
        in_B.clear();
        for (std::size_t b : batch.blocks) {
            const auto a = raw_A.subspan(b * n, n);
            in_A.insert(in_A.end(), a.begin(), a.end());
            in_B.insert(in_B.end(), agreed_B[b].begin(), agreed_B[b].end());
        }
        batch.seed = random_toeplitz_seed(n_total, batch.m, public_rng);
        transcript.add(PublicKind::toeplitz_seed, n_total + batch.m - 1);
        const Bits ka = privacy_amplify(in_A, batch.seed, batch.m);
        const Bits kb = privacy_amplify(in_B, batch.seed, batch.m);
        out.final_A.insert(out.final_A.end(), ka.begin(), ka.end());
        out.final_B.insert(out.final_B.end(), kb.begin(), kb.end());
        out.batches.push_back(std::move(batch));
    }
    return out;
}

}  // namespace rislab
