#pragma once

// Periodic points: existence criteria, the periodic-block decision
// procedure and enumeration of Per_p with orbit counts.
//
// A point of period p is represented by a length-p block u with u^infinity
// in the subshift; the bi-infinite sequence itself is never built.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rsub/core.hpp"
#include "rsub/disjoint.hpp"
#include "rsub/language.hpp"
#include "rsub/spectral.hpp"

namespace rsub {

  struct EnumerationReport;
  struct EnumerateOptions;
  class Analyzer;

  namespace detail {
    class BlockSearch;
  }

  EnumerationReport enumerate_blocks(Analyzer const&         an,
                                     std::size_t             p,
                                     EnumerateOptions const& opts);

  // Everything the periodic engine needs about one substitution, computed on
  // first use and cached. Safe to share between threads.
  class Analyzer {
   public:
    explicit Analyzer(RandomSubstitution theta, LanguageOptions opts = {});

    RandomSubstitution const& substitution() const noexcept {
      return _lang.substitution();
    }
    Language const& language() const noexcept {
      return _lang;
    }
    CompatibilityReport const& compatibility() const noexcept {
      return _compat;
    }
    bool primitive() const noexcept {
      return _primitive;
    }

    // Throws PreconditionError unless compatible and primitive.
    void require_primitive_compatible() const;
    PerronData const& perron() const;
    DisjointReport const& disjoint() const;

   private:
    friend EnumerationReport enumerate_blocks(Analyzer const&, std::size_t,
                                              EnumerateOptions const&);
    friend class detail::BlockSearch;

    Language            _lang;
    CompatibilityReport _compat;
    bool                _primitive = false;

    mutable std::once_flag                 _perron_once;
    mutable std::optional<PerronData>      _perron;
    mutable std::once_flag                 _disjoint_once;
    mutable std::optional<DisjointReport>  _disjoint;

    // verdicts of the block search, keyed by canonical rotation
    mutable std::shared_mutex                             _block_mutex;
    mutable std::unordered_map<Word, bool, WordHash>      _block_memo;
    mutable std::mutex                                    _enum_mutex;
    // keyed by (period, fast path allowed)
    mutable std::map<std::pair<std::size_t, bool>, std::shared_ptr<EnumerationReport const>>
        _enum_memo;
  };

  enum class NecessaryFailure { irrational_lambda, period_not_multiple };

  struct NecessaryConditions {
    bool                             pass = false;
    std::optional<NecessaryFailure>  failure;
    std::optional<std::int64_t>      virtual_period;
    // (p / virtual period) * r_hat, the letter counts every block must have
    std::optional<AbelianVector>     forced;
  };

  NecessaryConditions necessary_conditions(Analyzer const& an, std::size_t p);

  enum class EmptinessReason { irrational_lambda, unavoidable_word };

  struct ExistenceReport {
    bool                           lambda_integer = false;
    std::optional<std::int64_t>    virtual_period;
    bool                           proven_empty = false;
    std::optional<EmptinessReason> reason;
    // Legal words of length l that are not inflation words; computed only
    // for constant-length substitutions with disjoint images.
    std::vector<Word>           candidates;
    std::optional<bool>         disjoint_images;
    // The unavoidable set and window that proved emptiness.
    std::vector<Word>           unavoidable_set;
    std::optional<std::size_t>  window;
  };

  // Tries windows l..max_window, singletons from the candidate set before
  // the whole set.
  ExistenceReport emptiness_check(Analyzer const& an, std::size_t max_window);

  enum class BlockFailure {
    necessary_conditions,
    illegal,
    illegal_square,
    no_decomposition,
    exhausted
  };

  struct TraceEntry {
    Word              candidate;  // as reached
    Word              canonical;
    BlockFailure      reason = BlockFailure::exhausted;
    // the illegal word for illegal / illegal_square
    std::optional<Word> offending;
    std::vector<Word> successors;  // canonical forms
    std::size_t       depth = 0;
  };

  // rotation^i(block^j) lies in theta(preimage)
  struct LoopStep {
    Word        block;
    std::size_t rotation = 0;
    std::size_t power    = 1;
    Word        preimage;
  };

  struct PeriodicBlockVerdict {
    bool        periodic = false;
    Word        root;
    std::size_t root_power = 1;
    // On yes: the chain of preimages; the last preimage's canonical form
    // equals the canonical form of an earlier block.
    std::vector<LoopStep> loop;
    Word                  repeated;
    // On no: every candidate examined, in search order.
    std::vector<TraceEntry> trace;
  };

  // Requires a compatible primitive substitution with disjoint images.
  PeriodicBlockVerdict is_periodic_block(Analyzer const& an, Word const& u);

  // Checks every step of a yes-certificate.
  bool verify_loop(RandomSubstitution const& theta, PeriodicBlockVerdict const& v);

  enum class EnumerationPath { none, fast, general };

  struct EnumerateOptions {
    std::size_t jobs           = 1;
    bool        allow_fast_path = true;
  };

  struct EnumerationReport {
    std::size_t         period = 0;
    std::vector<Word>   blocks;  // sorted
    std::uint64_t       per_count = 0;
    // |Orb_d| for the divisors d of p with a nonzero count
    std::map<std::size_t, std::uint64_t> orbit_counts;
    EnumerationPath     path = EnumerationPath::none;
    NecessaryConditions necessary;
  };

  EnumerationReport enumerate_blocks(Analyzer const&         an,
                                     std::size_t             p,
                                     EnumerateOptions const& opts);
  inline EnumerationReport enumerate_blocks(Analyzer const& an, std::size_t p) {
    return enumerate_blocks(an, p, EnumerateOptions{});
  }

  // theta(u) for a verified periodic block u; every result is a block of
  // length lambda * |u|.
  std::vector<Word> periodic_image_blocks(Analyzer const& an, Word const& u);

  // |Orb_d| = (1/d) sum_{e | d} mu(d/e) |Per_e|
  std::map<std::size_t, std::uint64_t>
  orbit_counts_from(std::map<std::size_t, std::uint64_t> const& per_counts, std::size_t p);

  std::string to_string(NecessaryFailure f);
  std::string to_string(EmptinessReason r);
  std::string to_string(BlockFailure f);
  std::string to_string(EnumerationPath p);

}  // namespace rsub
