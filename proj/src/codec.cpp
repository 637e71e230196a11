#include "stag/codec.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace stag::codec {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

bool self_rotations_ok(uint64_t w, int width, int min_hd) {
  for (int r = 1; r < 4; ++r) {
    if (hamming_distance(w, rotate_word(w, width, r)) < min_hd) return false;
  }
  return true;
}

MarkerLibrary generate_direct(int code_length, int min_hd) {
  MarkerLibrary lib;
  lib.code_length = code_length;
  lib.min_hamming_distance = min_hd;
  std::vector<uint64_t> stored;  // accepted words and their rotations
  const uint64_t limit = 1ull << code_length;
  for (uint64_t w = 0; w < limit; ++w) {
    if (!self_rotations_ok(w, code_length, min_hd)) continue;
    bool ok = true;
    for (uint64_t s : stored) {
      if (hamming_distance(w, s) < min_hd) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    lib.codewords.push_back(w);
    for (int r = 0; r < 4; ++r) stored.push_back(rotate_word(w, code_length, r));
  }
  return lib;
}

// Hierarchical tuple scan. Candidates are ordered 4-tuples of 12-bit
// sub-codewords; the stored set (accepted words plus their quarter-turn
// rotations) is indexed by the sub-codeword occupying each block position.
// Because distinct sub-codewords differ by at least stage1_min_hd bits and
// 4 * ceil(min_hd / 4) >= min_hd, any stored word within min_hd - 1 of a
// candidate must share at least one exact block with it, so scanning the four
// block buckets finds every possible violation.
class TupleScanner {
 public:
  TupleScanner(const std::vector<uint64_t>& subs, int min_hd, int threads)
      : subs_(subs), min_hd_(min_hd), threads_(threads) {}

  std::vector<uint64_t> run(bool allow_repeats) {
    const int s = static_cast<int>(subs_.size());
    buckets_.assign(4, std::vector<std::vector<uint32_t>>(s));
    accepted_.clear();
    stored_.clear();

    std::vector<uint32_t> survivors;
    for (int i0 = 0; i0 < s; ++i0) {
      for (int i1 = 0; i1 < s; ++i1) {
        const uint64_t prefix = (subs_[i0] << 36) | (subs_[i1] << 24);
        const size_t snapshot = stored_.size();
        screen_chunk(prefix, i0, i1, snapshot, allow_repeats, &survivors);
        for (uint32_t packed : survivors) {
          const int i2 = packed >> 16;
          const int i3 = packed & 0xffff;
          const uint64_t w = prefix | (subs_[i2] << 12) | subs_[i3];
          if (violates_since(w, i0, i1, i2, i3, snapshot)) continue;
          accept(w, i0, i1, i2, i3);
        }
      }
    }
    return accepted_;
  }

 private:
  // Parallel pre-screen of one (i0, i1) chunk against the frozen stored set.
  void screen_chunk(uint64_t prefix, int i0, int i1, size_t snapshot,
                    bool allow_repeats, std::vector<uint32_t>* survivors) {
    const int s = static_cast<int>(subs_.size());
    const int total = s * s;
    survivors->clear();
    auto check_range = [&](int begin, int end, std::vector<uint32_t>* out) {
      for (int k = begin; k < end; ++k) {
        const int i2 = k / s;
        const int i3 = k % s;
        if (!allow_repeats && (i2 == i0 || i2 == i1 || i2 == i3 || i3 == i0 || i3 == i1 ||
                               i1 == i0)) {
          continue;
        }
        const uint64_t w = prefix | (subs_[i2] << 12) | subs_[i3];
        if (!self_rotations_ok(w, 48, min_hd_)) continue;
        if (violates_stored(w, i0, i1, i2, i3, snapshot)) continue;
        out->push_back(static_cast<uint32_t>((i2 << 16) | i3));
      }
    };
    if (threads_ <= 1 || stored_.size() < 4096) {
      check_range(0, total, survivors);
      return;
    }
    const int n = threads_;
    std::vector<std::vector<uint32_t>> partial(n);
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (int t = 0; t < n; ++t) {
      const int begin = static_cast<int>(static_cast<int64_t>(total) * t / n);
      const int end = static_cast<int>(static_cast<int64_t>(total) * (t + 1) / n);
      workers.emplace_back(check_range, begin, end, &partial[t]);
    }
    for (auto& th : workers) th.join();
    for (auto& p : partial) survivors->insert(survivors->end(), p.begin(), p.end());
  }

  // True if some stored word with index < limit is within min_hd - 1 of w.
  bool violates_stored(uint64_t w, int i0, int i1, int i2, int i3, size_t limit) const {
    const std::array<int, 4> blocks = {i0, i1, i2, i3};
    for (int p = 0; p < 4; ++p) {
      const auto& bucket = buckets_[p][blocks[p]];
      for (uint32_t id : bucket) {
        if (id >= limit) break;  // ids are appended in ascending order
        if (hamming_distance(w, stored_[id]) < min_hd_) return true;
      }
    }
    return false;
  }

  // True if some stored word with index >= since is within min_hd - 1 of w.
  bool violates_since(uint64_t w, int i0, int i1, int i2, int i3, size_t since) const {
    const std::array<int, 4> blocks = {i0, i1, i2, i3};
    for (int p = 0; p < 4; ++p) {
      const auto& bucket = buckets_[p][blocks[p]];
      auto it = std::lower_bound(bucket.begin(), bucket.end(), static_cast<uint32_t>(since));
      for (; it != bucket.end(); ++it) {
        if (hamming_distance(w, stored_[*it]) < min_hd_) return true;
      }
    }
    return false;
  }

  void accept(uint64_t w, int i0, int i1, int i2, int i3) {
    accepted_.push_back(w);
    std::array<int, 4> blocks = {i0, i1, i2, i3};
    for (int r = 0; r < 4; ++r) {
      const uint32_t id = static_cast<uint32_t>(stored_.size());
      stored_.push_back(rotate_word(w, 48, r));
      // rotate_word shifts left: the block at position p of rotation r is the
      // block at position (p + r) mod 4 of the original.
      for (int p = 0; p < 4; ++p) {
        buckets_[p][blocks[(p + r) % 4]].push_back(id);
      }
    }
  }

  const std::vector<uint64_t>& subs_;
  const int min_hd_;
  const int threads_;
  std::vector<uint64_t> accepted_;
  std::vector<uint64_t> stored_;
  // buckets_[position][sub_index] -> stored ids having that sub-codeword there
  std::vector<std::vector<std::vector<uint32_t>>> buckets_;
};

}  // namespace

std::vector<uint64_t> generate_plain_lexicode(int width, int min_hd) {
  if (width < 1 || width > 20) throw std::invalid_argument("plain lexicode width out of range");
  std::vector<uint64_t> accepted;
  const uint64_t limit = 1ull << width;
  for (uint64_t w = 0; w < limit; ++w) {
    bool ok = true;
    for (uint64_t a : accepted) {
      if (hamming_distance(w, a) < min_hd) {
        ok = false;
        break;
      }
    }
    if (ok) accepted.push_back(w);
  }
  return accepted;
}

MarkerLibrary generate_library(int code_length, int min_hd, GenerationMode mode,
                               const GenerationOptions& options) {
  if (code_length <= 0 || code_length % 4 != 0) {
    throw std::invalid_argument("code_length must be a positive multiple of 4");
  }
  if (min_hd < 1) throw std::invalid_argument("min_hd must be >= 1");
  if (mode == GenerationMode::kDirect) {
    if (code_length > 16) {
      throw std::invalid_argument("direct generation is limited to code_length <= 16");
    }
    return generate_direct(code_length, min_hd);
  }
  if (code_length != 48) {
    throw std::invalid_argument("hierarchical generation assembles 4x12-bit blocks (code_length 48)");
  }
  const int stage1 = options.stage1_min_hd > 0 ? options.stage1_min_hd : (min_hd + 3) / 4;
  const std::vector<uint64_t> subs = generate_plain_lexicode(12, stage1);

  MarkerLibrary lib;
  lib.code_length = 48;
  lib.min_hamming_distance = min_hd;
  TupleScanner scanner(subs, min_hd, resolve_threads(options.num_threads));
  lib.codewords = scanner.run(options.allow_repeated_blocks);
  return lib;
}

DecodeTable::DecodeTable(const MarkerLibrary& library)
    : code_length_(library.code_length),
      default_max_correct_(max_correctable(library)) {
  entries_.reserve(library.codewords.size() * 4);
  for (int id = 0; id < library.size(); ++id) {
    for (int r = 0; r < 4; ++r) {
      entries_.push_back({rotate_word(library.codewords[id], library.code_length, r), id, r});
    }
  }
}

std::optional<DecodeResult> DecodeTable::decode(uint64_t word, int max_correct) const {
  if (max_correct < 0) max_correct = default_max_correct_;
  int best = code_length_ + 1;
  const Entry* best_entry = nullptr;
  for (const Entry& e : entries_) {
    const int d = hamming_distance(word, e.word);
    if (d < best) {
      best = d;
      best_entry = &e;
      if (d == 0) break;
    }
  }
  if (!best_entry || best > max_correct) return std::nullopt;
  return DecodeResult{best_entry->id, best_entry->rotation, best};
}

std::optional<DecodeResult> decode(uint64_t word, const MarkerLibrary& library,
                                   int max_correct) {
  return DecodeTable(library).decode(word, max_correct);
}

int max_correctable(const MarkerLibrary& library) {
  return (library.min_hamming_distance - 1) / 2;
}

double max_ber_correction(const MarkerLibrary& library) {
  if (library.empty()) throw std::invalid_argument("max_ber_correction on empty library");
  return static_cast<double>(max_correctable(library)) / library.code_length;
}

int realized_min_distance(const MarkerLibrary& library, int num_threads) {
  const int n = library.size();
  if (n < 1) return library.code_length + 1;
  const int threads = std::min(resolve_threads(num_threads), std::max(1, n));
  std::vector<int> mins(threads, library.code_length + 1);
  auto worker = [&](int t) {
    int local = library.code_length + 1;
    for (int i = t; i < n; i += threads) {
      const uint64_t wi = library.codewords[i];
      for (int r = 1; r < 4; ++r) {
        local = std::min(local,
                         hamming_distance(wi, rotate_word(wi, library.code_length, r)));
      }
      for (int j = i + 1; j < n; ++j) {
        for (int r = 0; r < 4; ++r) {
          local = std::min(local, hamming_distance(wi, rotate_word(library.codewords[j],
                                                                   library.code_length, r)));
        }
      }
    }
    mins[t] = local;
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();
  return *std::min_element(mins.begin(), mins.end());
}

bool verify_library(const MarkerLibrary& library, int num_threads) {
  if (library.empty()) return true;
  for (uint64_t w : library.codewords) {
    if (library.code_length < 64 && (w >> library.code_length) != 0) return false;
  }
  return realized_min_distance(library, num_threads) >= library.min_hamming_distance;
}

std::string format_codeword(uint64_t word, int width) {
  const int digits = width / 4;
  std::string out(digits, '0');
  static const char* kHex = "0123456789ABCDEF";
  for (int i = 0; i < digits; ++i) {
    out[digits - 1 - i] = kHex[(word >> (4 * i)) & 0xf];
  }
  return out;
}

void save_library(const MarkerLibrary& library, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "STAGLIB v1 " << library.code_length << " " << library.min_hamming_distance << "\n";
  for (uint64_t w : library.codewords) {
    out << format_codeword(w, library.code_length) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

MarkerLibrary load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open library: " + path);
  std::string tag, version;
  MarkerLibrary lib;
  if (!(in >> tag >> version >> lib.code_length >> lib.min_hamming_distance) ||
      tag != "STAGLIB" || version != "v1") {
    throw std::runtime_error("not a STAGLIB v1 file: " + path);
  }
  if (lib.code_length <= 0 || lib.code_length > 64 || lib.code_length % 4 != 0) {
    throw std::runtime_error("invalid code length in: " + path);
  }
  std::string line;
  std::getline(in, line);
  const size_t digits = static_cast<size_t>(lib.code_length) / 4;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.size() != digits) throw std::runtime_error("malformed codeword line in: " + path);
    uint64_t w = 0;
    for (char c : line) {
      int v;
      if (c >= '0' && c <= '9') {
        v = c - '0';
      } else if (c >= 'A' && c <= 'F') {
        v = c - 'A' + 10;
      } else {
        throw std::runtime_error("malformed codeword line in: " + path);
      }
      w = (w << 4) | static_cast<uint64_t>(v);
    }
    lib.codewords.push_back(w);
  }
  return lib;
}

}  // namespace stag::codec
