#include "rsub/language.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <string>
#include <thread>

#include "rsub/error.hpp"
#include "rsub/spectral.hpp"

namespace rsub {

  ////////////////////////////////////////////////////////////////////////
  // WordTable
  ////////////////////////////////////////////////////////////////////////

  namespace {
    unsigned bits_for(std::size_t alphabet_size) {
      return alphabet_size <= 2 ? 1u : static_cast<unsigned>(std::bit_width(alphabet_size - 1));
    }
  }  // namespace

  bool WordTable::packable(std::size_t length, std::size_t alphabet_size) {
    return length * bits_for(alphabet_size) <= 64;
  }

  std::uint64_t WordTable::pack(Word const& w, std::size_t alphabet_size) {
    unsigned const bits = bits_for(alphabet_size);
    std::uint64_t  key  = 0;
    for (Letter a : w.letters()) {
      key = (key << bits) | a;
    }
    return key;
  }

  WordTable::WordTable(std::size_t       length,
                       std::size_t       alphabet_size,
                       std::vector<Word> words,
                       std::size_t       depth)
      : _length(length),
        _alphabet_size(alphabet_size),
        _bits(bits_for(alphabet_size)),
        _packed(packable(length, alphabet_size)),
        _depth(depth) {
    for (auto const& w : words) {
      if (w.size() != length) {
        throw InvalidArgument("word table entries must share one length");
      }
    }
    if (_packed) {
      _keys.reserve(words.size());
      for (auto const& w : words) {
        _keys.push_back(pack(w, alphabet_size));
      }
      std::sort(_keys.begin(), _keys.end());
      _keys.erase(std::unique(_keys.begin(), _keys.end()), _keys.end());
    } else {
      _words = std::move(words);
      canonicalize(_words);
    }
  }

  WordTable::WordTable(std::size_t                length,
                       std::size_t                alphabet_size,
                       std::vector<std::uint64_t> keys,
                       std::size_t                depth)
      : _length(length),
        _alphabet_size(alphabet_size),
        _bits(bits_for(alphabet_size)),
        _packed(true),
        _keys(std::move(keys)),
        _depth(depth) {
    if (!packable(length, alphabet_size)) {
      throw InvalidArgument("word length too large for packed keys");
    }
    std::sort(_keys.begin(), _keys.end());
    _keys.erase(std::unique(_keys.begin(), _keys.end()), _keys.end());
  }

  bool WordTable::contains(Word const& w) const {
    if (w.size() != _length) {
      return false;
    }
    if (_packed) {
      for (Letter a : w.letters()) {
        if (a >= _alphabet_size) {
          return false;
        }
      }
      return std::binary_search(_keys.begin(), _keys.end(), pack(w, _alphabet_size));
    }
    return std::binary_search(_words.begin(), _words.end(), w);
  }

  Word WordTable::at(std::size_t i) const {
    if (!_packed) {
      return _words.at(i);
    }
    std::uint64_t key  = _keys.at(i);
    std::uint64_t mask = (std::uint64_t(1) << _bits) - 1;
    std::string   raw(_length, '\0');
    for (std::size_t j = _length; j-- > 0;) {
      raw[j] = static_cast<char>(key & mask);
      key >>= _bits;
    }
    return Word::from_raw(std::move(raw));
  }

  std::vector<Word> WordTable::words() const {
    if (!_packed) {
      return _words;
    }
    std::vector<Word> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      out.push_back(at(i));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Table construction helpers
  ////////////////////////////////////////////////////////////////////////

  namespace {

    // Collects words of one length, packed when possible.
    class TableBuilder {
     public:
      TableBuilder(std::size_t n, std::size_t alphabet_size)
          : _n(n),
            _d(alphabet_size),
            _bits(bits_for(alphabet_size)),
            _packed(WordTable::packable(n, alphabet_size)) {}

      void add(Word const& w) {
        if (_packed) {
          push_key(WordTable::pack(w, _d));
        } else {
          _words.insert(w);
        }
      }

      // Every length-n factor of x.
      void add_windows(Word const& x) {
        if (x.size() < _n) {
          return;
        }
        if (!_packed) {
          for (std::size_t i = 0; i + _n <= x.size(); ++i) {
            _words.insert(x.substr(i, _n));
          }
          return;
        }
        std::uint64_t const mask
            = _n * _bits == 64 ? ~std::uint64_t(0)
                               : (std::uint64_t(1) << (_n * _bits)) - 1;
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          key = ((key << _bits) | x[i]) & mask;
          if (i + 1 >= _n) {
            push_key(key);
          }
        }
      }

      WordTable finish(std::size_t depth) && {
        if (_packed) {
          return WordTable(_n, _d, std::move(_keys), depth);
        }
        return WordTable(_n, _d, sorted(_words), depth);
      }

     private:
      void push_key(std::uint64_t key) {
        _keys.push_back(key);
        if (_keys.size() >= _compact_at) {
          std::sort(_keys.begin(), _keys.end());
          _keys.erase(std::unique(_keys.begin(), _keys.end()), _keys.end());
          _compact_at = std::max<std::size_t>(1 << 20, 2 * _keys.size());
        }
      }

      std::size_t                _n;
      std::size_t                _d;
      unsigned                   _bits;
      bool                       _packed;
      std::vector<std::uint64_t> _keys;
      std::size_t                _compact_at = 1 << 20;
      WordSet                    _words;
    };

    // What the level iteration remembers about one letter at one level: the
    // realisations shorter than n verbatim and, for the longer ones, their
    // length-n factors plus their (n-1)-letter ends.
    struct Fragments {
      WordSet shorts;
      WordSet windows;
      WordSet heads;
      WordSet tails;

      bool has_long() const {
        return !tails.empty();
      }
      friend bool operator==(Fragments const&, Fragments const&) = default;
    };

    // Suffixes of length s of every word in T, for s = 0..n-1.
    std::vector<WordSet> suffix_sets(WordSet const& T, std::size_t n) {
      std::vector<WordSet> out(n);
      for (auto const& t : T) {
        for (std::size_t s = 0; s < n; ++s) {
          out[s].insert(t.suffix(s));
        }
      }
      return out;
    }

    std::vector<WordSet> prefix_sets(WordSet const& P, std::size_t n) {
      std::vector<WordSet> out(n);
      for (auto const& p : P) {
        for (std::size_t s = 0; s < n; ++s) {
          out[s].insert(p.prefix(s));
        }
      }
      return out;
    }

    // Running state while concatenating the blocks of one image word.
    struct Concat {
      WordSet shorts{Word()};
      WordSet heads;
      WordSet tails;
    };

    // Appends a block with fragments F to every partial concatenation in c.
    Concat extend(Concat const& c, Fragments const& F, std::size_t n, WordSet& windows) {
      Concat out;
      out.shorts.clear();

      for (auto const& s : c.shorts) {
        for (auto const& f : F.shorts) {
          Word z = s + f;
          if (z.size() < n) {
            out.shorts.insert(std::move(z));
            continue;
          }
          // windows starting inside s; the rest were seen at lower levels
          for (std::size_t i = 0; i < s.size() && i + n <= z.size(); ++i) {
            windows.insert(z.substr(i, n));
          }
          out.heads.insert(z.prefix(n - 1));
          out.tails.insert(z.suffix(n - 1));
        }
        if (F.has_long()) {
          for (auto const& p : F.heads) {
            Word z = s + p;
            for (std::size_t i = 0; i < s.size() && i + n <= z.size(); ++i) {
              windows.insert(z.substr(i, n));
            }
            out.heads.insert(z.prefix(n - 1));
          }
        }
      }
      if (!c.shorts.empty() && F.has_long()) {
        out.tails.insert(F.tails.begin(), F.tails.end());
        windows.insert(F.windows.begin(), F.windows.end());
      }

      if (!c.tails.empty()) {
        out.heads.insert(c.heads.begin(), c.heads.end());
        auto suf = suffix_sets(c.tails, n);
        for (auto const& f : F.shorts) {
          std::size_t const k = f.size();
          for (std::size_t s = (k >= n ? 1 : std::max<std::size_t>(1, n - k)); s < n; ++s) {
            Word tail_of_f = f.prefix(n - s);
            for (auto const& t : suf[s]) {
              windows.insert(t + tail_of_f);
            }
          }
          for (auto const& t : suf[n - 1 - k]) {
            out.tails.insert(t + f);
          }
        }
        if (F.has_long()) {
          windows.insert(F.windows.begin(), F.windows.end());
          out.tails.insert(F.tails.begin(), F.tails.end());
          auto pre = prefix_sets(F.heads, n);
          for (std::size_t s = 1; s < n; ++s) {
            for (auto const& t : suf[s]) {
              for (auto const& p : pre[n - s]) {
                windows.insert(t + p);
              }
            }
          }
        }
      }
      return out;
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Language
  ////////////////////////////////////////////////////////////////////////

  Language::Language(RandomSubstitution theta, LanguageOptions opts)
      : _theta(std::move(theta)), _opts(std::move(opts)) {
    _fingerprint = fingerprint(_theta);
    _inflation   = _theta.inflation_words();
    _compatible  = is_compatible(_theta).compatible;
    _primitive   = is_primitive(_theta);
    _covers      = _compatible && _primitive && _theta.min_image_len() >= 2;
  }

  WordTable Language::legal_words_by_levels(std::size_t n) const {
    if (n == 0) {
      return WordTable(0, _theta.size(), std::vector<Word>{Word()}, 0);
    }
    std::size_t const d = _theta.size();

    std::vector<Fragments> level(d);
    for (std::size_t a = 0; a < d; ++a) {
      Word w{static_cast<Letter>(a)};
      if (n == 1) {
        level[a].windows.insert(w);
        level[a].heads.insert(Word());
        level[a].tails.insert(Word());
      } else {
        level[a].shorts.insert(w);
      }
    }

    TableBuilder                        table(n, d);
    std::vector<std::vector<Fragments>> history;
    std::size_t                         depth = 0;
    for (;;) {
      for (auto const& F : level) {
        for (auto const& w : F.windows) {
          table.add(w);
        }
      }
      if (std::find(history.begin(), history.end(), level) != history.end()) {
        break;
      }
      history.push_back(level);

      std::vector<Fragments> next(d);
      for (std::size_t a = 0; a < d; ++a) {
        for (auto const& image : _theta.images(static_cast<Letter>(a))) {
          Concat c;
          for (Letter b : image.letters()) {
            c = extend(c, level[b], n, next[a].windows);
          }
          next[a].shorts.insert(c.shorts.begin(), c.shorts.end());
          next[a].heads.insert(c.heads.begin(), c.heads.end());
          next[a].tails.insert(c.tails.begin(), c.tails.end());
        }
      }
      level = std::move(next);
      ++depth;
    }
    return std::move(table).finish(depth);
  }

  WordTable Language::legal_words_by_covers(std::size_t n) const {
    if (!_covers || n < 3) {
      throw PreconditionError(
          "cover generation needs a compatible primitive substitution with "
          "inflation words of length at least two, and n >= 3");
    }
    std::size_t const m      = (n - 2) / _theta.min_image_len() + 2;
    auto              source = legal_words(m);
    TableBuilder      table(n, _theta.size());
    Word              x;
    for (std::size_t i = 0; i < source->size(); ++i) {
      RealisationStream stream(_theta, source->at(i));
      while (stream.next(x)) {
        table.add_windows(x);
      }
    }
    return std::move(table).finish(source->depth() + 1);
  }

  std::optional<std::filesystem::path> Language::cache_file(std::size_t n) const {
    if (!_opts.cache_dir) {
      return std::nullopt;
    }
    return *_opts.cache_dir / (_fingerprint + "-" + std::to_string(n) + ".words");
  }

  std::shared_ptr<WordTable const> Language::build(std::size_t n) const {
    auto file = cache_file(n);
    if (file && std::filesystem::exists(*file)) {
      return std::make_shared<WordTable const>(read_table(*file, n, _theta.alphabet()));
    }
    auto table = std::make_shared<WordTable const>(
        _covers && n >= 3 ? legal_words_by_covers(n) : legal_words_by_levels(n));
    if (file) {
      write_table(*file, *table, _theta.alphabet());
    }
    return table;
  }

  std::shared_ptr<WordTable const> Language::legal_words(std::size_t n) const {
    if (n == 0) {
      throw InvalidArgument("legal words need a positive length");
    }
    if (!_compatible) {
      throw PreconditionError("legal words need a compatible substitution");
    }
    if (!_primitive) {
      throw PreconditionError("legal words need a primitive substitution");
    }
    std::promise<std::shared_ptr<WordTable const>>      promise;
    std::shared_future<std::shared_ptr<WordTable const>> future;
    bool                                                  builder = false;
    {
      std::lock_guard lock(_mutex);
      auto            it = _tables.find(n);
      if (it == _tables.end()) {
        future  = promise.get_future().share();
        builder = true;
        _tables.emplace(n, future);
      } else {
        future = it->second;
      }
    }
    if (builder) {
      try {
        promise.set_value(build(n));
      } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(_mutex);
        _tables.erase(n);
        throw;
      }
    }
    return future.get();
  }

  bool Language::is_legal(Word const& u) const {
    if (u.empty()) {
      return true;
    }
    for (Letter a : u.letters()) {
      if (a >= _theta.size()) {
        return false;
      }
    }
    std::size_t const n = u.size();
    bool              cached;
    {
      std::lock_guard lock(_mutex);
      cached = _tables.contains(n);
    }
    if (cached || n <= _opts.table_limit || !_covers || n < 3) {
      return legal_words(n)->contains(u);
    }
    return is_legal_by_covers(u);
  }

  bool Language::is_legal_by_covers(Word const& u) const {
    std::size_t const n = u.size();
    if (!_covers || n < 3) {
      throw PreconditionError(
          "cover membership needs a compatible primitive substitution with "
          "inflation words of length at least two, and |u| >= 3");
    }
    // every letter is legal under primitivity
    for (auto const& [c, w] : _inflation) {
      if (w.contains(u)) {
        return true;
      }
    }
    auto const& text = u.raw();
    Word        pre;
    // u[pos..] continues the cover; pre holds the letters chosen so far
    std::function<bool(std::size_t)> parse = [&](std::size_t pos) -> bool {
      if (pos == n) {
        return is_legal(pre);
      }
      std::size_t const rest = n - pos;
      for (auto const& [c, w] : _inflation) {
        auto const& x = w.raw();
        if (x.size() <= rest) {
          if (text.compare(pos, x.size(), x) != 0) {
            continue;
          }
          pre.push_back(c);
          bool ok = parse(pos + x.size());
          pre.pop_back();
          if (ok) {
            return true;
          }
        } else if (x.compare(0, rest, text, pos, rest) == 0) {
          pre.push_back(c);
          bool ok = is_legal(pre);
          pre.pop_back();
          if (ok) {
            return true;
          }
        }
      }
      return false;
    };
    for (auto const& [c, w] : _inflation) {
      auto const& x = w.raw();
      for (std::size_t s = 1; s <= std::min(x.size(), n - 1); ++s) {
        if (x.compare(x.size() - s, s, text, 0, s) != 0) {
          continue;
        }
        pre = Word{c};
        if (parse(s)) {
          return true;
        }
      }
    }
    return false;
  }

  ////////////////////////////////////////////////////////////////////////
  // On-disk tables
  ////////////////////////////////////////////////////////////////////////

  void write_table(std::filesystem::path const& path,
                   WordTable const&             table,
                   Alphabet const&              alphabet) {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw IoError("cannot write " + tmp.string());
      }
      out << table.depth() << '\n';
      for (std::size_t i = 0; i < table.size(); ++i) {
        out << alphabet.format(table.at(i)) << '\n';
      }
      if (!out) {
        throw IoError("failed writing " + tmp.string());
      }
    }
    std::filesystem::rename(tmp, path);
  }

  WordTable read_table(std::filesystem::path const& path,
                       std::size_t                  length,
                       Alphabet const&              alphabet) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
      throw IoError(path.string() + ": missing depth line");
    }
    std::size_t depth = 0;
    try {
      depth = std::stoull(line);
    } catch (std::exception const&) {
      throw IoError(path.string() + ": malformed depth line");
    }
    std::vector<Word> words;
    while (std::getline(in, line)) {
      if (line.empty()) {
        continue;
      }
      Word w = alphabet.parse(line);
      if (w.size() != length) {
        throw IoError(path.string() + ": word of unexpected length");
      }
      words.push_back(std::move(w));
    }
    return WordTable(length, alphabet.size(), std::move(words), depth);
  }

  ////////////////////////////////////////////////////////////////////////
  // Decomposition
  ////////////////////////////////////////////////////////////////////////

  std::vector<Decomposition> decompose(Language const&  lang,
                                       Word const&      w,
                                       DecomposeOptions opts) {
    std::size_t const n = w.size();
    if (n == 0) {
      return {};
    }
    auto const  inflation = lang.substitution().inflation_words();
    auto const& text      = w.raw();

    std::vector<std::vector<std::size_t>> matches(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
      for (std::size_t k = 0; k < inflation.size(); ++k) {
        auto const& x = inflation[k].second.raw();
        if (pos + x.size() <= n && text.compare(pos, x.size(), x) == 0) {
          matches[pos].push_back(k);
        }
      }
    }
    // finishes[pos]: some concatenation covers w[pos..] exactly
    std::vector<char> finishes(n + 1, 0);
    finishes[n] = 1;
    for (std::size_t pos = n; pos-- > 0;) {
      for (auto k : matches[pos]) {
        if (finishes[pos + inflation[k].second.size()]) {
          finishes[pos] = 1;
          break;
        }
      }
    }

    std::vector<Decomposition> out;
    if (!finishes[0]) {
      return out;
    }
    std::size_t const limit = opts.max_preimage_length.value_or(n);
    Decomposition     cur;
    std::function<void(std::size_t)> walk = [&](std::size_t pos) {
      if (pos == n) {
        if (lang.is_legal(cur.preimage)) {
          Decomposition d = cur;
          d.cut_points.push_back(n);
          out.push_back(std::move(d));
        }
        return;
      }
      if (cur.preimage.size() >= limit) {
        return;
      }
      for (auto k : matches[pos]) {
        auto const& [c, x] = inflation[k];
        if (!finishes[pos + x.size()]) {
          continue;
        }
        cur.preimage.push_back(c);
        cur.cut_points.push_back(pos);
        cur.realisations.push_back(x);
        walk(pos + x.size());
        cur.preimage.pop_back();
        cur.cut_points.pop_back();
        cur.realisations.pop_back();
      }
    };
    walk(0);
    std::sort(out.begin(), out.end(), [](auto const& x, auto const& y) {
      if (x.preimage != y.preimage) {
        return x.preimage < y.preimage;
      }
      return x.cut_points < y.cut_points;
    });
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Unavoidable sets
  ////////////////////////////////////////////////////////////////////////

  Unavoidability unavoidable(Language const&          lang,
                             std::vector<Word> const& V,
                             std::size_t              n) {
    for (auto const& v : V) {
      if (v.empty() || !lang.is_legal(v)) {
        throw InvalidArgument("every member of V must be a nonempty legal word");
      }
      if (v.size() > n) {
        throw InvalidArgument("the window must be at least as long as every member of V");
      }
    }
    Unavoidability result;
    result.window      = n;
    result.unavoidable = true;
    auto table         = lang.legal_words(n);
    for (std::size_t i = 0; i < table->size(); ++i) {
      Word u = table->at(i);
      bool hit = std::any_of(V.begin(), V.end(), [&](Word const& v) { return u.contains(v); });
      if (!hit) {
        result.unavoidable = false;
        result.witness     = std::move(u);
        break;
      }
    }
    return result;
  }

}  // namespace rsub
