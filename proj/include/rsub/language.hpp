#pragma once

// The language of a random substitution: legal words, membership,
// decomposition into exact inflation words, and unavoidable sets.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "rsub/core.hpp"

namespace rsub {

  // The sorted set of legal words of one length. Words over small alphabets
  // are packed into 64-bit keys whose numeric order is the lexicographic
  // order, which keeps tables with millions of entries compact.
  class WordTable {
   public:
    WordTable(std::size_t       length,
              std::size_t       alphabet_size,
              std::vector<Word> words,
              std::size_t       depth = 0);

    // Used by the generators; keys must already be packed for this length
    // and alphabet size.
    WordTable(std::size_t                length,
              std::size_t                alphabet_size,
              std::vector<std::uint64_t> keys,
              std::size_t                depth);

    static bool packable(std::size_t length, std::size_t alphabet_size);
    static std::uint64_t pack(Word const& w, std::size_t alphabet_size);

    std::size_t length() const noexcept {
      return _length;
    }
    std::size_t size() const noexcept {
      return _packed ? _keys.size() : _words.size();
    }
    // Number of substitution steps the generator ran before it could
    // certify the table complete.
    std::size_t depth() const noexcept {
      return _depth;
    }

    bool contains(Word const& w) const;
    Word at(std::size_t i) const;
    std::vector<Word> words() const;

    template <typename Func>
    void for_each(Func&& f) const {
      for (std::size_t i = 0; i < size(); ++i) {
        f(at(i));
      }
    }

    friend bool operator==(WordTable const& x, WordTable const& y) {
      return x.words() == y.words();
    }

   private:
    std::size_t                _length;
    std::size_t                _alphabet_size;
    unsigned                   _bits = 1;
    bool                       _packed;
    std::vector<std::uint64_t> _keys;
    std::vector<Word>          _words;
    std::size_t                _depth;
  };

  struct LanguageOptions {
    // is_legal answers from a full table up to this length and by
    // de-substitution beyond it, when de-substitution is available.
    std::size_t table_limit = 16;
    // Directory for the optional on-disk table cache.
    std::optional<std::filesystem::path> cache_dir;
  };

  // Legal words of one substitution, with a per-length table cache that is
  // safe for concurrent readers. A missing table is built once; concurrent
  // requests for the same length wait for that build.
  class Language {
   public:
    explicit Language(RandomSubstitution theta, LanguageOptions opts = {});

    Language(Language const&)            = delete;
    Language& operator=(Language const&) = delete;

    RandomSubstitution const& substitution() const noexcept {
      return _theta;
    }
    LanguageOptions const& options() const noexcept {
      return _opts;
    }

    // L^n, cached.
    std::shared_ptr<WordTable const> legal_words(std::size_t n) const;

    bool is_legal(Word const& u) const;

    // Whether L^n can be built from L^m, m < n, by substituting legal words.
    // This needs compatibility, primitivity and inflation words of length at
    // least two.
    bool covers_available() const noexcept {
      return _covers;
    }

    // The two independent generators behind legal_words; uncached.
    //
    // by_levels: tracks, per letter and per power k, the length-n factors of
    // theta^k(a) together with the length-(n-1) boundary fragments and the
    // realisations shorter than n. The per-letter state at level k+1 is a
    // function of the state at level k, so the first repeated state proves
    // that no new factor can appear.
    WordTable legal_words_by_levels(std::size_t n) const;
    // by_covers: every legal n-word lies in theta(v) for a legal v of length
    // at most (n-2)/min_len + 2.
    WordTable legal_words_by_covers(std::size_t n) const;
    bool is_legal_by_covers(Word const& u) const;

   private:
    std::shared_ptr<WordTable const> build(std::size_t n) const;
    std::optional<std::filesystem::path> cache_file(std::size_t n) const;

    RandomSubstitution _theta;
    LanguageOptions    _opts;
    bool               _compatible = false;
    bool               _primitive  = false;
    bool               _covers     = false;
    std::string        _fingerprint;
    std::vector<std::pair<Letter, Word>> _inflation;

    mutable std::mutex _mutex;
    mutable std::map<std::size_t, std::shared_future<std::shared_ptr<WordTable const>>>
        _tables;
  };

  // Writes and reads the on-disk table format: first line the generator
  // depth, then one word per line in symbol notation.
  void write_table(std::filesystem::path const& path,
                   WordTable const&             table,
                   Alphabet const&              alphabet);
  WordTable read_table(std::filesystem::path const& path,
                       std::size_t                  length,
                       Alphabet const&              alphabet);

  struct Decomposition {
    Word preimage;
    // Start offsets of the realisations in w, followed by |w|.
    std::vector<std::size_t> cut_points;
    std::vector<Word>        realisations;
  };

  struct DecomposeOptions {
    std::optional<std::size_t> max_preimage_length;
  };

  // Every way of writing w as theta(a_1)...theta(a_k) with a_1...a_k legal,
  // sorted by preimage. Empty when w is not such a concatenation.
  std::vector<Decomposition> decompose(Language const&  lang,
                                       Word const&      w,
                                       DecomposeOptions opts = {});

  struct Unavoidability {
    bool                unavoidable = false;
    std::size_t         window      = 0;
    // Least legal word of length window containing no member of V.
    std::optional<Word> witness;
  };

  // Whether every legal word of length n contains some member of V.
  Unavoidability unavoidable(Language const&          lang,
                             std::vector<Word> const& V,
                             std::size_t              n);

}  // namespace rsub
