#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stag::codec {

/// A fixed-width binary code word. Bit 0 is the first coding disk in the
/// canonical disk ordering; bits above `width` are zero.
struct Codeword {
  uint64_t bits = 0;
  int width = 48;
};

inline int hamming_distance(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

/// Circular rotation by quarter turns of the word width. A quarter turn of
/// the physical marker shifts the read word by width/4 bits.
inline uint64_t rotate_word(uint64_t w, int width, int quarter_turns) {
  const int step = width / 4;
  const int s = ((quarter_turns % 4) + 4) % 4 * step;
  if (s == 0) return w;
  const uint64_t mask = width == 64 ? ~0ull : ((1ull << width) - 1);
  return ((w << s) | (w >> (width - s))) & mask;
}

/// A marker code library. Every ordered pair of codewords, and every codeword
/// against its own non-trivial rotations, keeps Hamming distance of at least
/// `min_hamming_distance` under all four quarter-turn rotations.
struct MarkerLibrary {
  int code_length = 48;
  int min_hamming_distance = 1;
  std::vector<uint64_t> codewords;  // generation order
  static constexpr int kRotationCount = 4;

  int rotation_step_bits() const { return code_length / kRotationCount; }
  int size() const { return static_cast<int>(codewords.size()); }
  bool empty() const { return codewords.empty(); }
};

enum class GenerationMode { kDirect, kHierarchical };

struct GenerationOptions {
  /// Minimum pairwise Hamming distance for the 12-bit stage of hierarchical
  /// generation; 0 selects the default ceil(min_hd / 4).
  int stage1_min_hd = 0;
  /// Whether 4-tuples may repeat a sub-codeword. The assembled word is always
  /// validated against the full rotation-closed constraint either way.
  bool allow_repeated_blocks = true;
  /// Worker threads for candidate pre-screening; acceptance order is
  /// independent of this value. 0 selects hardware concurrency.
  int num_threads = 0;
};

/// Greedy lexicographic generation of a rotation-closed library.
///
/// kDirect scans every code_length-bit word in ascending numeric order and is
/// limited to code_length <= 16. kHierarchical first builds a plain 12-bit
/// lexicode, then scans ordered 4-tuples of those sub-codewords in
/// lexicographic tuple order; each assembled word must still satisfy the full
/// rotation-closed constraint. Deterministic for fixed inputs. An empty
/// library is a valid result, not an error.
MarkerLibrary generate_library(int code_length, int min_hd, GenerationMode mode,
                               const GenerationOptions& options = {});

/// Plain greedy lexicode (pairwise Hamming distance only, no rotation
/// closure). Used for the hierarchical sub-codeword stage; exposed for tests.
std::vector<uint64_t> generate_plain_lexicode(int width, int min_hd);

struct DecodeResult {
  int marker_id = -1;
  int rotation = 0;        // quarter turns
  int hamming_distance = 0;  // bit errors corrected
};

/// Precomputed list of all codewords and their circular rotations, for
/// population-count decoding.
class DecodeTable {
 public:
  explicit DecodeTable(const MarkerLibrary& library);

  /// Returns the (id, rotation) of the stored rotation variant with minimal
  /// Hamming distance to `word`, provided that distance is within
  /// `max_correct`; otherwise no match. max_correct < 0 selects the library
  /// default floor((min_hd - 1) / 2).
  std::optional<DecodeResult> decode(uint64_t word, int max_correct = -1) const;

  int default_max_correct() const { return default_max_correct_; }
  int code_length() const { return code_length_; }

 private:
  struct Entry {
    uint64_t word;
    int32_t id;
    int32_t rotation;
  };
  std::vector<Entry> entries_;
  int code_length_;
  int default_max_correct_;
};

std::optional<DecodeResult> decode(uint64_t word, const MarkerLibrary& library,
                                   int max_correct = -1);

/// floor((min_hd - 1) / 2): the per-word correction budget that still
/// guarantees a unique decode.
int max_correctable(const MarkerLibrary& library);

/// Correctable bit error ratio: max_correctable / code_length.
double max_ber_correction(const MarkerLibrary& library);

/// Exhaustive rotation-closed pairwise check of the library invariants.
/// Returns the realized minimum distance over all distinct rotation variants
/// (including self-rotations); a library is valid iff this is >=
/// min_hamming_distance. Returns code_length + 1 for libraries of size < 1.
int realized_min_distance(const MarkerLibrary& library, int num_threads = 0);

bool verify_library(const MarkerLibrary& library, int num_threads = 0);

/// STAGLIB v1 text format: header line `STAGLIB v1 <code_length> <min_hd>`,
/// then one codeword per line as code_length/4 uppercase hex digits.
void save_library(const MarkerLibrary& library, const std::string& path);
MarkerLibrary load_library(const std::string& path);
std::string format_codeword(uint64_t word, int width);

}  // namespace stag::codec
