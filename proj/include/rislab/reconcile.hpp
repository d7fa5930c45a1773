#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rislab/quantize.hpp"
#include "rislab/rng.hpp"

namespace rislab {

// Maps a syndrome difference to the lowest-weight error pattern within the
// code's radius, or nothing.
class SyndromeDecoder {
public:
    virtual ~SyndromeDecoder() = default;
    virtual std::optional<Bits> error_pattern(std::span<const std::uint8_t> syndrome_diff) const = 0;
};

struct BlockCodeSpec {
    std::string name;
    int n = 0;
    int k = 0;
    int t = 0;
    std::vector<Bits> parity_check;  // (n-k) rows × n columns
    std::shared_ptr<const SyndromeDecoder> decoder;
    // parity_check rows packed into 64-bit words; filled by the factories
    std::vector<std::uint64_t> packed_rows;
};

// Validates the spec (dimensions, full row rank) and fills packed_rows.
void finalize_code(BlockCodeSpec& code);

BlockCodeSpec hamming74();
BlockCodeSpec bch127_64();

// Generic code with a syndrome lookup table over all patterns of weight <= t.
// Only practical for short codes.
BlockCodeSpec make_table_code(std::string name, std::vector<Bits> parity_check, int t);

std::size_t gf2_rank(std::vector<Bits> rows);

Bits syndrome(std::span<const std::uint8_t> block, const BlockCodeSpec& code);

// Bob's side of one-way reconciliation. nullopt is the failure flag.
std::optional<Bits> reconcile_block(std::span<const std::uint8_t> block_B,
                                    std::span<const std::uint8_t> syndrome_A,
                                    const BlockCodeSpec& code);

// m × n Toeplitz matrix: T[i][j] = first_row[j-i] for j >= i, first_col[i-j] otherwise.
struct ToeplitzSeed {
    Bits first_row;
    Bits first_col;
};

ToeplitzSeed random_toeplitz_seed(std::size_t n, std::size_t m, Rng& rng);

Bits privacy_amplify(std::span<const std::uint8_t> bits, const ToeplitzSeed& seed, std::size_t m);

std::size_t leakage_budget(std::size_t n_total, const BlockCodeSpec& code, std::size_t n_blocks,
                           std::size_t safety_bits);

constexpr std::size_t kConfirmationBits = 32;

// Hash length used to confirm one block: 32 bits, or the whole block when the
// block is no longer than that (a shorter hash would let miscorrections through).
std::size_t confirmation_bits(const BlockCodeSpec& code);

// Toeplitz seed reserved for key confirmation; public and fixed per block
// length. bits == n gives the identity.
ToeplitzSeed confirmation_seed(std::size_t n, std::size_t bits = kConfirmationBits);
std::uint32_t confirmation_hash(std::span<const std::uint8_t> block, const ToeplitzSeed& seed);

enum class PublicKind {
    retained_indices,
    interleaver_seed,
    syndrome,
    confirmation_hash,
    block_decision,
    toeplitz_seed
};

const char* to_string(PublicKind k);

struct TranscriptItem {
    PublicKind kind;
    std::size_t bits = 0;
    std::int64_t block = -1;
};

// Everything sent in the clear, in order.
struct Transcript {
    std::vector<TranscriptItem> items;

    void add(PublicKind kind, std::size_t bits, std::int64_t block = -1) {
        items.push_back({kind, bits, block});
    }
    std::size_t total_bits() const;
    std::size_t bits_of(PublicKind kind) const;
};

struct BlockRecord {
    Bits syndrome_A;
    std::uint32_t hash_A = 0;
    bool decoded = false;
    bool confirmed = false;
};

struct BatchRecord {
    std::vector<std::size_t> blocks;
    ToeplitzSeed seed;
    std::size_t m = 0;
};

struct AgreementOptions {
    std::size_t safety_bits = 32;
    std::size_t batch_blocks = 8;
    // upper bound on secret bits per raw bit (estimated mutual information);
    // each batch emits at most this share of its input, less safety_bits
    double secret_fraction = 1.0;
    // shuffle raw bits with a public permutation before blocking so that
    // bursts of agreement or disagreement spread over all blocks
    bool interleave = true;
};

// Public pseudo-random permutation of [0, n) (Fisher-Yates).
std::vector<std::size_t> interleaver(std::size_t n, std::uint64_t seed);

struct KeyAgreement {
    std::optional<std::uint64_t> interleaver_seed;
    Bits final_A;
    Bits final_B;
    std::vector<BlockRecord> blocks;
    std::vector<BatchRecord> batches;
    std::size_t leakage_bits = 0;
    std::size_t blocks_failed = 0;
};

// Block syndrome reconciliation, key confirmation and batched privacy
// amplification on two equal-length raw keys. Trailing bits that do not
// fill a block are dropped. Block b holds interleaved positions [b*n, (b+1)*n).
KeyAgreement agree_keys(std::span<const std::uint8_t> raw_A, std::span<const std::uint8_t> raw_B,
                        const BlockCodeSpec& code, const AgreementOptions& options, Rng& public_rng,
                        Transcript& transcript);

}  // namespace rislab
