#pragma once

// Alphabets, words and random substitutions.
//
// Letters are small integer indices into an Alphabet; the textual symbols
// only matter when reading or printing. Words order by length first and then
// lexicographically by letter index ("shortlex"), and every set this library
// returns is sorted in that order.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rsub {

  using Letter = std::uint8_t;

  class Word {
   public:
    Word() = default;
    Word(std::initializer_list<Letter> letters);
    explicit Word(std::span<Letter const> letters);

    // Builds a word from letter indices stored as raw bytes.
    static Word from_raw(std::string raw) {
      Word w;
      w._data = std::move(raw);
      return w;
    }

    std::size_t size() const noexcept {
      return _data.size();
    }
    bool empty() const noexcept {
      return _data.empty();
    }
    Letter operator[](std::size_t i) const noexcept {
      return static_cast<Letter>(_data[i]);
    }
    std::span<Letter const> letters() const noexcept {
      return {reinterpret_cast<Letter const*>(_data.data()), _data.size()};
    }
    std::string const& raw() const noexcept {
      return _data;
    }

    void push_back(Letter a) {
      _data.push_back(static_cast<char>(a));
    }
    void pop_back() {
      _data.pop_back();
    }
    void reserve(std::size_t n) {
      _data.reserve(n);
    }

    Word substr(std::size_t pos, std::size_t len = std::string::npos) const {
      return from_raw(_data.substr(pos, len));
    }
    Word prefix(std::size_t len) const {
      return substr(0, len);
    }
    Word suffix(std::size_t len) const {
      return len >= size() ? *this : substr(size() - len);
    }
    bool starts_with(Word const& other) const noexcept {
      return std::string_view(_data).starts_with(other._data);
    }
    bool contains(Word const& other) const noexcept {
      return _data.find(other._data) != std::string::npos;
    }

    // u^k
    Word power(std::size_t k) const;

    Word& operator+=(Word const& other) {
      _data += other._data;
      return *this;
    }
    friend Word operator+(Word lhs, Word const& rhs) {
      lhs += rhs;
      return lhs;
    }

    friend bool operator==(Word const&, Word const&) = default;
    // shortlex
    friend std::strong_ordering operator<=>(Word const& x, Word const& y) {
      if (x.size() != y.size()) {
        return x.size() <=> y.size();
      }
      int c = x._data.compare(y._data);
      return c < 0 ? std::strong_ordering::less
                   : (c > 0 ? std::strong_ordering::greater
                            : std::strong_ordering::equal);
    }

   private:
    std::string _data;
  };

  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept {
      return std::hash<std::string>{}(w.raw());
    }
  };

  using WordSet = std::unordered_set<Word, WordHash>;

  // Sorts and de-duplicates in place.
  void canonicalize(std::vector<Word>& words);
  std::vector<Word> sorted(WordSet const& words);

  class Alphabet {
   public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const noexcept {
      return _symbols.size();
    }
    std::string const& symbol(Letter a) const {
      return _symbols.at(a);
    }
    std::vector<std::string> const& symbols() const noexcept {
      return _symbols;
    }
    std::optional<Letter> index(std::string_view symbol) const;

    // True when every symbol is a single character, in which case words are
    // written as bare strings ("aab"); otherwise letters are dot-separated
    // ("a1.a2").
    bool single_char() const noexcept {
      return _single_char;
    }

    std::string format(Word const& w) const;
    Word parse(std::string_view text) const;

    friend bool operator==(Alphabet const& x, Alphabet const& y) {
      return x._symbols == y._symbols;
    }

   private:
    std::vector<std::string>                  _symbols;
    std::unordered_map<std::string, Letter> _index;
    bool                                      _single_char = true;
  };

  struct AbelianVector {
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const noexcept;

    AbelianVector& operator+=(AbelianVector const& other);
    friend AbelianVector operator+(AbelianVector lhs, AbelianVector const& rhs) {
      lhs += rhs;
      return lhs;
    }
    friend bool operator==(AbelianVector const&, AbelianVector const&) = default;
  };

  // A map from each letter to a finite nonempty set of nonempty words.
  class RandomSubstitution {
   public:
    RandomSubstitution(Alphabet alphabet, std::vector<std::vector<Word>> images);

    Alphabet const& alphabet() const noexcept {
      return _alphabet;
    }
    std::size_t size() const noexcept {
      return _alphabet.size();
    }
    // Sorted, duplicate free.
    std::vector<Word> const& images(Letter a) const {
      return _images.at(a);
    }
    std::vector<std::vector<Word>> const& all_images() const noexcept {
      return _images;
    }
    std::size_t max_image_len() const noexcept {
      return _max_len;
    }
    std::size_t min_image_len() const noexcept {
      return _min_len;
    }

    // Every (letter, image) pair, ordered by letter then image.
    std::vector<std::pair<Letter, Word>> inflation_words() const;

    friend bool operator==(RandomSubstitution const&, RandomSubstitution const&) = default;

   private:
    Alphabet                       _alphabet;
    std::vector<std::vector<Word>> _images;
    std::size_t                    _max_len = 0;
    std::size_t                    _min_len = 0;
  };

  AbelianVector abelianise(Word const& u, std::size_t alphabet_size);

  // alpha^i(u) where alpha(u_1 u_2 ... u_k) = u_2 ... u_k u_1.
  Word cyclic_permute(Word const& u, std::size_t i);

  // Number of (possibly overlapping) occurrences of pattern in text.
  std::size_t occurrences(Word const& pattern, Word const& text);

  // Shortest r with u = r^k; returns (r, k).
  std::pair<Word, std::size_t> primitive_root(Word const& u);

  // Lexicographically least cyclic rotation of u.
  Word least_rotation(Word const& u);

  // Least rotation of the primitive root; two words generate the same
  // periodic orbit exactly when their canonical rotations agree.
  Word canonical_rotation(Word const& u);

  // Iterates over theta(u) = theta(u_1)...theta(u_m) without materializing the
  // set. Realisations can repeat when different choices concatenate to the
  // same word.
  class RealisationStream {
   public:
    RealisationStream(RandomSubstitution const& theta, Word u);

    // Writes the next realisation into out; false once exhausted.
    bool next(Word& out);

    // Product of the per-letter image counts (saturating).
    std::uint64_t choice_count() const noexcept;

   private:
    RandomSubstitution const* _theta;
    Word                      _u;
    std::vector<std::size_t>  _choice;
    bool                      _done = false;
  };

  std::vector<Word> apply(RandomSubstitution const& theta, Word const& u);

  std::vector<Word> apply_power(RandomSubstitution const& theta,
                                Word const&               u,
                                std::size_t               k);

  // theta^k as a random substitution in its own right.
  RandomSubstitution power(RandomSubstitution const& theta, std::size_t k);

  // Stable 64-bit FNV-1a hash of the canonical rule text, as 16 hex digits.
  std::string fingerprint(RandomSubstitution const& theta);

  // Textual rendering "alphabet: a b\na -> ab | ba\n..." that parse_spec
  // accepts.
  std::string to_spec_text(RandomSubstitution const& theta);

}  // namespace rsub
