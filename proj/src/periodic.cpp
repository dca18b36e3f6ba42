#include "rsub/periodic.hpp"

#include <algorithm>
#include <thread>
#include <tuple>

#include "rsub/error.hpp"

namespace rsub {

  std::string to_string(NecessaryFailure f) {
    return f == NecessaryFailure::irrational_lambda ? "irrational_lambda"
                                                    : "period_not_multiple";
  }

  std::string to_string(EmptinessReason r) {
    return r == EmptinessReason::irrational_lambda ? "irrational_lambda" : "unavoidable_word";
  }

  std::string to_string(BlockFailure f) {
    switch (f) {
      case BlockFailure::necessary_conditions: return "necessary_conditions";
      case BlockFailure::illegal: return "illegal";
      case BlockFailure::illegal_square: return "illegal_square";
      case BlockFailure::no_decomposition: return "no_decomposition";
      case BlockFailure::exhausted: return "exhausted";
    }
    return "unknown";
  }

  std::string to_string(EnumerationPath p) {
    switch (p) {
      case EnumerationPath::none: return "none";
      case EnumerationPath::fast: return "fast";
      case EnumerationPath::general: return "general";
    }
    return "unknown";
  }

  ////////////////////////////////////////////////////////////////////////
  // Analyzer
  ////////////////////////////////////////////////////////////////////////

  Analyzer::Analyzer(RandomSubstitution theta, LanguageOptions opts)
      : _lang(std::move(theta), std::move(opts)),
        _compat(is_compatible(_lang.substitution())),
        _primitive(is_primitive(_lang.substitution())) {}

  void Analyzer::require_primitive_compatible() const {
    if (!_compat) {
      auto const& ce = *_compat.counterexample;
      auto const& A  = substitution().alphabet();
      throw PreconditionError("substitution is not compatible: images " + A.format(ce.first)
                              + " and " + A.format(ce.second) + " of letter "
                              + A.symbol(ce.letter) + " have different abelianisations");
    }
    if (!_primitive) {
      throw PreconditionError("substitution is not primitive");
    }
  }

  PerronData const& Analyzer::perron() const {
    std::call_once(_perron_once, [this] { _perron = perron_analysis(substitution()); });
    return *_perron;
  }

  DisjointReport const& Analyzer::disjoint() const {
    std::call_once(_disjoint_once, [this] { _disjoint = has_disjoint_images(_lang); });
    return *_disjoint;
  }

  ////////////////////////////////////////////////////////////////////////
  // Existence criteria
  ////////////////////////////////////////////////////////////////////////

  NecessaryConditions necessary_conditions(Analyzer const& an, std::size_t p) {
    an.require_primitive_compatible();
    if (p == 0) {
      throw InvalidArgument("the period must be positive");
    }
    auto const&         P = an.perron();
    NecessaryConditions out;
    if (!P.lambda_exact) {
      out.failure = NecessaryFailure::irrational_lambda;
      return out;
    }
    auto const vp      = *P.virtual_period;
    out.virtual_period = vp;
    if (p % static_cast<std::size_t>(vp) != 0) {
      out.failure = NecessaryFailure::period_not_multiple;
      return out;
    }
    AbelianVector forced;
    for (auto r : *P.r_hat) {
      forced.counts.push_back(static_cast<std::uint64_t>(r) * (p / static_cast<std::size_t>(vp)));
    }
    out.forced = std::move(forced);
    out.pass   = true;
    return out;
  }

  ExistenceReport emptiness_check(Analyzer const& an, std::size_t max_window) {
    an.require_primitive_compatible();
    if (max_window == 0) {
      throw InvalidArgument("the window bound must be positive");
    }
    ExistenceReport out;
    auto const&     P = an.perron();
    out.lambda_integer = P.lambda_exact.has_value();
    out.virtual_period = P.virtual_period;
    if (!P.lambda_exact) {
      out.proven_empty = true;
      out.reason       = EmptinessReason::irrational_lambda;
      return out;
    }
    auto const& theta = an.substitution();
    auto const  ell   = constant_length(theta);
    if (!ell) {
      return out;
    }
    out.disjoint_images = an.disjoint().disjoint;
    if (!*out.disjoint_images) {
      return out;
    }
    auto const& lang  = an.language();
    auto        table = lang.legal_words(*ell);
    for (std::size_t k = 0; k < table->size(); ++k) {
      Word w      = table->at(k);
      bool inflat = false;
      for (std::size_t a = 0; a < theta.size() && !inflat; ++a) {
        auto const& imgs = theta.images(static_cast<Letter>(a));
        inflat           = std::binary_search(imgs.begin(), imgs.end(), w);
      }
      if (!inflat) {
        out.candidates.push_back(std::move(w));
      }
    }
    if (out.candidates.empty()) {
      return out;
    }
    for (std::size_t n = *ell; n <= max_window; ++n) {
      for (auto const& v : out.candidates) {
        if (unavoidable(lang, {v}, n).unavoidable) {
          out.proven_empty    = true;
          out.reason          = EmptinessReason::unavoidable_word;
          out.unavoidable_set = {v};
          out.window          = n;
          return out;
        }
      }
      if (out.candidates.size() > 1 && unavoidable(lang, out.candidates, n).unavoidable) {
        out.proven_empty    = true;
        out.reason          = EmptinessReason::unavoidable_word;
        out.unavoidable_set = out.candidates;
        out.window          = n;
        return out;
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Block search
  ////////////////////////////////////////////////////////////////////////

  namespace detail {

    // Depth-first search over rotation classes. A class is examined once;
    // its successors are the classes of the legal preimages of rotations of
    // its powers. Reaching a class that is still on the stack closes a loop,
    // which makes every class on the stack a periodic block. Classes whose
    // search finished without a loop can never reach one.
    class BlockSearch {
     public:
      BlockSearch(Analyzer const& an, bool use_memo, bool record)
          : _an(an), _use_memo(use_memo), _record(record) {}

      bool run(Word const& found) {
        return visit(found, canonical_rotation(found), 0);
      }

      std::vector<LoopStep>   loop;
      Word                    repeated;
      std::vector<TraceEntry> trace;

     private:
      enum class Color { gray, black };

      struct Successor {
        Word        canonical;
        Word        preimage;
        std::size_t rotation;
        std::size_t power;
      };

      std::optional<bool> recall(Word const& canon) const {
        if (!_use_memo) {
          return std::nullopt;
        }
        std::shared_lock lock(_an._block_mutex);
        auto             it = _an._block_memo.find(canon);
        if (it == _an._block_memo.end()) {
          return std::nullopt;
        }
        return it->second;
      }

      void remember(Word const& canon, bool verdict) const {
        if (_use_memo) {
          std::unique_lock lock(_an._block_mutex);
          _an._block_memo.emplace(canon, verdict);
        }
      }

      // Necessary conditions that depend on the class only.
      std::optional<std::pair<BlockFailure, std::optional<Word>>>
      screen(Word const& found, Word const& canon) const {
        auto const nc = necessary_conditions(_an, canon.size());
        if (!nc.pass
            || !(abelianise(canon, _an.substitution().size()) == *nc.forced)) {
          return std::pair{BlockFailure::necessary_conditions, std::optional<Word>{}};
        }
        auto const& lang = _an.language();
        if (!lang.is_legal(found)) {
          return std::pair{BlockFailure::illegal, std::optional<Word>{found}};
        }
        // every rotation squared is a factor of the periodic point
        for (std::size_t i = 0; i < found.size(); ++i) {
          Word r  = cyclic_permute(found, i);
          Word sq = r + r;
          if (!lang.is_legal(sq)) {
            return std::pair{BlockFailure::illegal_square, std::optional<Word>{sq}};
          }
        }
        return std::nullopt;
      }

      std::vector<Successor> successors(Word const& found) const {
        auto const&            theta = _an.substitution();
        std::size_t const      q     = found.size();
        std::vector<Successor> out;
        WordSet                seen;
        for (std::size_t j = 1; j <= theta.max_image_len(); ++j) {
          Word fj = found.power(j);
          for (std::size_t i = 0; i < q; ++i) {
            auto decs = decompose(_an.language(), cyclic_permute(fj, i),
                                  DecomposeOptions{.max_preimage_length = q});
            for (auto& d : decs) {
              Word c = canonical_rotation(d.preimage);
              if (seen.insert(c).second) {
                out.push_back({std::move(c), std::move(d.preimage), i, j});
              }
            }
          }
        }
        return out;
      }

      bool visit(Word const& found, Word const& canon, std::size_t depth) {
        if (auto known = recall(canon)) {
          return *known;
        }
        if (auto it = _color.find(canon); it != _color.end()) {
          if (it->second == Color::gray) {
            if (_record) {
              loop     = _path;
              repeated = canon;
            }
            return true;
          }
          return false;
        }
        _color.emplace(canon, Color::gray);

        std::size_t entry = trace.size();
        if (_record) {
          trace.push_back({found, canon, BlockFailure::exhausted, std::nullopt, {}, depth});
        }
        auto fail = [&](BlockFailure why, std::optional<Word> offending) {
          _color[canon] = Color::black;
          remember(canon, false);
          if (_record) {
            trace[entry].reason    = why;
            trace[entry].offending = std::move(offending);
          }
          return false;
        };

        if (auto bad = screen(found, canon)) {
          return fail(bad->first, std::move(bad->second));
        }
        auto next = successors(found);
        if (_record) {
          for (auto const& s : next) {
            trace[entry].successors.push_back(s.canonical);
          }
        }
        if (next.empty()) {
          return fail(BlockFailure::no_decomposition, std::nullopt);
        }
        for (auto const& s : next) {
          _path.push_back({found, s.rotation, s.power, s.preimage});
          if (visit(s.preimage, s.canonical, depth + 1)) {
            remember(canon, true);
            return true;
          }
          _path.pop_back();
        }
        return fail(BlockFailure::exhausted, std::nullopt);
      }

      Analyzer const&                           _an;
      bool                                      _use_memo;
      bool                                      _record;
      std::unordered_map<Word, Color, WordHash> _color;
      std::vector<LoopStep>                     _path;
    };

  }  // namespace detail

  namespace {
    void require_disjoint(Analyzer const& an) {
      if (!an.disjoint().disjoint) {
        throw PreconditionError("the periodic-block procedure needs disjoint images");
      }
    }
  }  // namespace

  PeriodicBlockVerdict is_periodic_block(Analyzer const& an, Word const& u) {
    if (u.empty()) {
      throw InvalidArgument("a periodic block must be nonempty");
    }
    for (Letter a : u.letters()) {
      if (a >= an.substitution().size()) {
        throw InvalidArgument("letter index out of range");
      }
    }
    an.require_primitive_compatible();
    require_disjoint(an);

    PeriodicBlockVerdict out;
    std::tie(out.root, out.root_power) = primitive_root(u);
    detail::BlockSearch search(an, false, true);
    out.periodic = search.run(out.root);
    if (out.periodic) {
      out.loop     = std::move(search.loop);
      out.repeated = std::move(search.repeated);
    } else {
      out.trace = std::move(search.trace);
    }
    return out;
  }

  bool verify_loop(RandomSubstitution const& theta, PeriodicBlockVerdict const& v) {
    if (!v.periodic || v.loop.empty()) {
      return false;
    }
    if (v.loop.front().block != v.root) {
      return false;
    }
    bool seen_repeat = false;
    for (std::size_t k = 0; k < v.loop.size(); ++k) {
      auto const& s = v.loop[k];
      if (s.preimage.empty() || s.preimage.size() > s.block.size()) {
        return false;
      }
      Word target = cyclic_permute(s.block.power(s.power), s.rotation);
      if (!realises(theta, s.preimage, target)) {
        return false;
      }
      if (k + 1 < v.loop.size() && v.loop[k + 1].block != s.preimage) {
        return false;
      }
      seen_repeat = seen_repeat || canonical_rotation(s.block) == v.repeated;
    }
    return seen_repeat && canonical_rotation(v.loop.back().preimage) == v.repeated;
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////

  namespace {

    int mobius(std::size_t n) {
      int result = 1;
      for (std::size_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
          n /= f;
          if (n % f == 0) {
            return 0;
          }
          result = -result;
        }
      }
      return n > 1 ? -result : result;
    }

    std::vector<std::size_t> divisors(std::size_t p) {
      std::vector<std::size_t> out;
      for (std::size_t d = 1; d <= p; ++d) {
        if (p % d == 0) {
          out.push_back(d);
        }
      }
      return out;
    }

    void add_rotations(Word const& w, std::vector<Word>& out) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        out.push_back(cyclic_permute(w, i));
      }
    }

  }  // namespace

  std::map<std::size_t, std::uint64_t>
  orbit_counts_from(std::map<std::size_t, std::uint64_t> const& per_counts, std::size_t p) {
    std::map<std::size_t, std::uint64_t> out;
    for (auto d : divisors(p)) {
      std::int64_t sum = 0;
      for (auto e : divisors(d)) {
        auto it = per_counts.find(e);
        if (it == per_counts.end()) {
          throw InvalidArgument("missing |Per_" + std::to_string(e) + "|");
        }
        sum += mobius(d / e) * static_cast<std::int64_t>(it->second);
      }
      if (sum % static_cast<std::int64_t>(d) != 0 || sum < 0) {
        throw Error("inconsistent periodic point counts at d = " + std::to_string(d));
      }
      if (sum != 0) {
        out[d] = static_cast<std::uint64_t>(sum / static_cast<std::int64_t>(d));
      }
    }
    return out;
  }

  EnumerationReport enumerate_blocks(Analyzer const&         an,
                                     std::size_t             p,
                                     EnumerateOptions const& opts) {
    if (p == 0) {
      throw InvalidArgument("the period must be positive");
    }
    an.require_primitive_compatible();
    auto const key = std::pair{p, opts.allow_fast_path};
    {
      std::lock_guard lock(an._enum_mutex);
      if (auto it = an._enum_memo.find(key); it != an._enum_memo.end()) {
        return *it->second;
      }
    }

    EnumerationReport out;
    out.period    = p;
    out.necessary = necessary_conditions(an, p);
    if (out.necessary.pass) {
      require_disjoint(an);
      auto const& theta = an.substitution();
      auto const  ell   = constant_length(theta);
      if (opts.allow_fast_path && ell && *ell > 1 && p % *ell == 0) {
        out.path = EnumerationPath::fast;
        auto sub = enumerate_blocks(an, p / *ell, opts);
        Word x;
        for (auto const& b : sub.blocks) {
          RealisationStream stream(theta, b);
          while (stream.next(x)) {
            add_rotations(x, out.blocks);
          }
        }
      } else {
        out.path = EnumerationPath::general;
        auto              table = an.language().legal_words(p);
        std::vector<Word> reps;
        for (std::size_t k = 0; k < table->size(); ++k) {
          Word w = table->at(k);
          if (abelianise(w, theta.size()) == *out.necessary.forced && least_rotation(w) == w) {
            reps.push_back(std::move(w));
          }
        }
        std::size_t const              jobs = std::max<std::size_t>(1, opts.jobs);
        std::vector<std::vector<Word>> found(jobs);
        std::vector<std::exception_ptr> errors(jobs);
        auto work = [&](std::size_t t) {
          try {
            for (std::size_t k = t; k < reps.size(); k += jobs) {
              Word c = canonical_rotation(reps[k]);
              detail::BlockSearch search(an, true, false);
              if (search.run(c)) {
                add_rotations(c.power(p / c.size()), found[t]);
              }
            }
          } catch (...) {
            errors[t] = std::current_exception();
          }
        };
        if (jobs == 1) {
          work(0);
        } else {
          std::vector<std::jthread> pool;
          for (std::size_t t = 0; t < jobs; ++t) {
            pool.emplace_back(work, t);
          }
        }
        for (auto const& e : errors) {
          if (e) {
            std::rethrow_exception(e);
          }
        }
        for (auto& part : found) {
          out.blocks.insert(out.blocks.end(), std::make_move_iterator(part.begin()),
                            std::make_move_iterator(part.end()));
        }
      }
      canonicalize(out.blocks);
    }
    out.per_count = out.blocks.size();

    std::map<std::size_t, std::uint64_t> per;
    for (auto d : divisors(p)) {
      per[d] = d == p ? out.per_count : enumerate_blocks(an, d, opts).per_count;
    }
    out.orbit_counts = orbit_counts_from(per, p);

    std::lock_guard lock(an._enum_mutex);
    auto [it, fresh] = an._enum_memo.emplace(key, std::make_shared<EnumerationReport const>(out));
    return *it->second;
  }

  std::vector<Word> periodic_image_blocks(Analyzer const& an, Word const& u) {
    an.require_primitive_compatible();
    if (!an.perron().lambda_exact) {
      throw PreconditionError("the expansion factor is not an integer");
    }
    if (!is_periodic_block(an, u).periodic) {
      throw PreconditionError("the word is not a periodic block");
    }
    return apply(an.substitution(), u);
  }

}  // namespace rsub
