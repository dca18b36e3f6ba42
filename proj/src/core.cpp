#include "rsub/core.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "rsub/error.hpp"

namespace rsub {

  ////////////////////////////////////////////////////////////////////////
  // Word
  ////////////////////////////////////////////////////////////////////////

  Word::Word(std::initializer_list<Letter> letters) {
    _data.reserve(letters.size());
    for (Letter a : letters) {
      _data.push_back(static_cast<char>(a));
    }
  }

  Word::Word(std::span<Letter const> letters) {
    _data.reserve(letters.size());
    for (Letter a : letters) {
      _data.push_back(static_cast<char>(a));
    }
  }

  Word Word::power(std::size_t k) const {
    std::string out;
    out.reserve(_data.size() * k);
    for (std::size_t i = 0; i < k; ++i) {
      out += _data;
    }
    return from_raw(std::move(out));
  }

  void canonicalize(std::vector<Word>& words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
  }

  std::vector<Word> sorted(WordSet const& words) {
    std::vector<Word> out(words.begin(), words.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Alphabet
  ////////////////////////////////////////////////////////////////////////

  Alphabet::Alphabet(std::vector<std::string> symbols)
      : _symbols(std::move(symbols)) {
    if (_symbols.empty()) {
      throw InvalidArgument("the alphabet must contain at least one letter");
    }
    if (_symbols.size() > std::numeric_limits<Letter>::max() + std::size_t(1)) {
      throw InvalidArgument("alphabets are limited to 256 letters");
    }
    for (std::size_t i = 0; i < _symbols.size(); ++i) {
      auto const& s = _symbols[i];
      if (s.empty()) {
        throw InvalidArgument("empty letter symbol");
      }
      for (char c : s) {
        if (c == '.' || c == '|' || c == '#' || c == ':'
            || static_cast<unsigned char>(c) <= ' ') {
          throw InvalidArgument("letter symbol '" + s
                                + "' contains a reserved character");
        }
      }
      if (!_index.emplace(s, static_cast<Letter>(i)).second) {
        throw InvalidArgument("duplicate letter symbol '" + s + "'");
      }
      _single_char = _single_char && s.size() == 1;
    }
  }

  std::optional<Letter> Alphabet::index(std::string_view symbol) const {
    auto it = _index.find(std::string(symbol));
    if (it == _index.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::string Alphabet::format(Word const& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!_single_char && i > 0) {
        out += '.';
      }
      out += _symbols.at(w[i]);
    }
    return out;
  }

  Word Alphabet::parse(std::string_view text) const {
    Word w;
    auto push = [&](std::string_view sym) {
      auto a = index(sym);
      if (!a) {
        throw InvalidArgument("unknown letter '" + std::string(sym) + "'");
      }
      w.push_back(*a);
    };
    if (_single_char && text.find('.') == std::string_view::npos) {
      for (char c : text) {
        push(std::string_view(&c, 1));
      }
      return w;
    }
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
      std::size_t dot = text.find('.', start);
      auto        tok = text.substr(start, dot == std::string_view::npos
                                                ? std::string_view::npos
                                                : dot - start);
      if (tok.empty()) {
        throw InvalidArgument("empty letter in word '" + std::string(text)
                              + "'");
      }
      push(tok);
      if (dot == std::string_view::npos) {
        break;
      }
      start = dot + 1;
    }
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // AbelianVector
  ////////////////////////////////////////////////////////////////////////

  std::uint64_t AbelianVector::total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts) {
      t += c;
    }
    return t;
  }

  AbelianVector& AbelianVector::operator+=(AbelianVector const& other) {
    if (other.counts.size() != counts.size()) {
      throw InvalidArgument("abelian vectors over different alphabets");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      counts[i] += other.counts[i];
    }
    return *this;
  }

  AbelianVector abelianise(Word const& u, std::size_t alphabet_size) {
    AbelianVector v{std::vector<std::uint64_t>(alphabet_size, 0)};
    for (Letter a : u.letters()) {
      if (a >= alphabet_size) {
        throw InvalidArgument("letter index out of range");
      }
      ++v.counts[a];
    }
    return v;
  }

  ////////////////////////////////////////////////////////////////////////
  // RandomSubstitution
  ////////////////////////////////////////////////////////////////////////

  RandomSubstitution::RandomSubstitution(Alphabet                       alphabet,
                                         std::vector<std::vector<Word>> images)
      : _alphabet(std::move(alphabet)), _images(std::move(images)) {
    if (_images.size() != _alphabet.size()) {
      throw InvalidArgument("expected one image set per letter");
    }
    _min_len = std::numeric_limits<std::size_t>::max();
    for (std::size_t a = 0; a < _images.size(); ++a) {
      auto& set = _images[a];
      if (set.empty()) {
        throw InvalidArgument("letter '" + _alphabet.symbol(a)
                              + "' has no images");
      }
      for (auto const& w : set) {
        if (w.empty()) {
          throw InvalidArgument("letter '" + _alphabet.symbol(a)
                                + "' has an empty image");
        }
        for (Letter b : w.letters()) {
          if (b >= _alphabet.size()) {
            throw InvalidArgument("image uses a letter outside the alphabet");
          }
        }
        _max_len = std::max(_max_len, w.size());
        _min_len = std::min(_min_len, w.size());
      }
      canonicalize(set);
    }
  }

  std::vector<std::pair<Letter, Word>>
  RandomSubstitution::inflation_words() const {
    std::vector<std::pair<Letter, Word>> out;
    for (std::size_t a = 0; a < _images.size(); ++a) {
      for (auto const& w : _images[a]) {
        out.emplace_back(static_cast<Letter>(a), w);
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Word combinatorics
  ////////////////////////////////////////////////////////////////////////

  Word cyclic_permute(Word const& u, std::size_t i) {
    if (u.empty()) {
      throw InvalidArgument("cannot cyclically permute the empty word");
    }
    i %= u.size();
    return u.substr(i) + u.prefix(i);
  }

  std::size_t occurrences(Word const& pattern, Word const& text) {
    if (pattern.empty()) {
      throw InvalidArgument("the pattern must be nonempty");
    }
    std::size_t count = 0;
    auto const& t     = text.raw();
    for (auto pos = t.find(pattern.raw()); pos != std::string::npos;
         pos      = t.find(pattern.raw(), pos + 1)) {
      ++count;
    }
    return count;
  }

  std::pair<Word, std::size_t> primitive_root(Word const& u) {
    std::size_t const n = u.size();
    if (n == 0) {
      return {u, 1};
    }
    // prefix function; the shortest period is n - border
    std::vector<std::size_t> pi(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t k = pi[i - 1];
      while (k > 0 && u[i] != u[k]) {
        k = pi[k - 1];
      }
      if (u[i] == u[k]) {
        ++k;
      }
      pi[i] = k;
    }
    std::size_t period = n - pi[n - 1];
    if (n % period != 0) {
      return {u, 1};
    }
    return {u.prefix(period), n / period};
  }

  Word least_rotation(Word const& u) {
    std::size_t const n = u.size();
    if (n <= 1) {
      return u;
    }
    std::size_t i = 0, j = 1, k = 0;
    while (i < n && j < n && k < n) {
      Letter x = u[(i + k) % n];
      Letter y = u[(j + k) % n];
      if (x == y) {
        ++k;
        continue;
      }
      if (x > y) {
        i += k + 1;
      } else {
        j += k + 1;
      }
      if (i == j) {
        ++j;
      }
      k = 0;
    }
    return cyclic_permute(u, std::min(i, j));
  }

  Word canonical_rotation(Word const& u) {
    return least_rotation(primitive_root(u).first);
  }

  ////////////////////////////////////////////////////////////////////////
  // Applying the substitution
  ////////////////////////////////////////////////////////////////////////

  RealisationStream::RealisationStream(RandomSubstitution const& theta, Word u)
      : _theta(&theta), _u(std::move(u)), _choice(_u.size(), 0) {
    if (_u.empty()) {
      throw InvalidArgument("cannot substitute the empty word");
    }
    for (Letter a : _u.letters()) {
      if (a >= theta.size()) {
        throw InvalidArgument("letter index out of range");
      }
    }
  }

  bool RealisationStream::next(Word& out) {
    if (_done) {
      return false;
    }
    out = Word();
    for (std::size_t i = 0; i < _u.size(); ++i) {
      out += _theta->images(_u[i])[_choice[i]];
    }
    // odometer, last position fastest
    std::size_t i = _u.size();
    while (i > 0) {
      --i;
      if (++_choice[i] < _theta->images(_u[i]).size()) {
        return true;
      }
      _choice[i] = 0;
    }
    _done = true;
    return true;
  }

  std::uint64_t RealisationStream::choice_count() const noexcept {
    std::uint64_t total = 1;
    for (Letter a : _u.letters()) {
      std::uint64_t k = _theta->images(a).size();
      if (total > std::numeric_limits<std::uint64_t>::max() / k) {
        return std::numeric_limits<std::uint64_t>::max();
      }
      total *= k;
    }
    return total;
  }

  std::vector<Word> apply(RandomSubstitution const& theta, Word const& u) {
    RealisationStream stream(theta, u);
    std::vector<Word> out;
    Word              w;
    while (stream.next(w)) {
      out.push_back(w);
    }
    canonicalize(out);
    return out;
  }

  std::vector<Word> apply_power(RandomSubstitution const& theta,
                                Word const&               u,
                                std::size_t               k) {
    if (u.empty()) {
      throw InvalidArgument("cannot substitute the empty word");
    }
    std::vector<Word> level{u};
    for (std::size_t step = 0; step < k; ++step) {
      WordSet next;
      for (auto const& w : level) {
        RealisationStream stream(theta, w);
        Word              x;
        while (stream.next(x)) {
          next.insert(x);
        }
      }
      level = sorted(next);
    }
    return level;
  }

  RandomSubstitution power(RandomSubstitution const& theta, std::size_t k) {
    std::vector<std::vector<Word>> images;
    for (std::size_t a = 0; a < theta.size(); ++a) {
      images.push_back(apply_power(theta, Word{static_cast<Letter>(a)}, k));
    }
    return RandomSubstitution(theta.alphabet(), std::move(images));
  }

  std::string to_spec_text(RandomSubstitution const& theta) {
    auto const& A   = theta.alphabet();
    std::string out = "alphabet:";
    for (auto const& s : A.symbols()) {
      out += ' ';
      out += s;
    }
    out += '\n';
    for (std::size_t a = 0; a < theta.size(); ++a) {
      out += A.symbol(a);
      out += " ->";
      bool first = true;
      for (auto const& w : theta.images(a)) {
        out += first ? " " : " | ";
        out += A.format(w);
        first = false;
      }
      out += '\n';
    }
    return out;
  }

  std::string fingerprint(RandomSubstitution const& theta) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_spec_text(theta)) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

}  // namespace rsub
