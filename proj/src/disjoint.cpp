#include "rsub/disjoint.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "rsub/error.hpp"
#include "rsub/spectral.hpp"

namespace rsub {

  std::string to_string(Side side) {
    return side == Side::left ? "left" : "right";
  }

  std::string to_string(DisjointMethod method) {
    return method == DisjointMethod::constant_length ? "constant_length"
                                                     : "remainder_search";
  }

  bool realises(RandomSubstitution const& theta, Word const& u, Word const& w) {
    // reachable end positions after each prefix of u
    std::set<std::size_t> at{0};
    auto const&           text = w.raw();
    for (Letter a : u.letters()) {
      if (a >= theta.size()) {
        return false;
      }
      std::set<std::size_t> next;
      for (auto pos : at) {
        for (auto const& x : theta.images(a)) {
          if (pos + x.size() <= text.size()
              && text.compare(pos, x.size(), x.raw()) == 0) {
            next.insert(pos + x.size());
          }
        }
      }
      at = std::move(next);
    }
    return at.contains(w.size());
  }

  bool verify_witness(Language const& lang, DisjointWitness const& witness) {
    auto const& theta = lang.substitution();
    return witness.u != witness.v && lang.is_legal(witness.u)
           && lang.is_legal(witness.v) && realises(theta, witness.u, witness.w)
           && realises(theta, witness.v, witness.w);
  }

  namespace {

    void require_equal_lengths(RandomSubstitution const& theta) {
      for (std::size_t a = 0; a < theta.size(); ++a) {
        auto const& imgs = theta.images(static_cast<Letter>(a));
        for (auto const& x : imgs) {
          if (x.size() != imgs.front().size()) {
            throw PreconditionError("images of letter " + theta.alphabet().symbol(a)
                                    + " have different lengths");
          }
        }
      }
    }

    DisjointWitness ordered(Word x, Word y, Word w) {
      if (y < x) {
        std::swap(x, y);
      }
      return {std::move(x), std::move(y), std::move(w)};
    }

    std::optional<DisjointWitness> letter_image_overlap(Language const& lang) {
      auto const& theta = lang.substitution();
      for (std::size_t a = 0; a < theta.size(); ++a) {
        for (std::size_t b = a + 1; b < theta.size(); ++b) {
          auto const& x = theta.images(static_cast<Letter>(a));
          auto const& y = theta.images(static_cast<Letter>(b));
          std::vector<Word> common;
          std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                                std::back_inserter(common));
          Word u{static_cast<Letter>(a)}, v{static_cast<Letter>(b)};
          if (!common.empty() && lang.is_legal(u) && lang.is_legal(v)) {
            return DisjointWitness{u, v, common.front()};
          }
        }
      }
      return std::nullopt;
    }

    // Remainders from which some sequence of moves empties the remainder,
    // ignoring legality. Remainders are nonempty proper suffixes of
    // inflation words.
    std::set<Word> live_remainders(RandomSubstitution const& theta) {
      auto           inflation = theta.inflation_words();
      std::set<Word> all;
      for (auto const& [c, x] : inflation) {
        for (std::size_t s = 1; s < x.size(); ++s) {
          all.insert(x.suffix(s));
        }
      }
      std::set<Word> live;
      for (bool grew = true; grew;) {
        grew = false;
        for (auto const& r : all) {
          if (live.contains(r)) {
            continue;
          }
          bool ok = false;
          for (auto const& [c, x] : inflation) {
            if (x == r) {
              ok = true;
            } else if (x.size() < r.size() && r.starts_with(x)) {
              ok = live.contains(r.substr(x.size()));
            } else if (x.size() > r.size() && x.starts_with(r)) {
              ok = live.contains(x.substr(r.size()));
            }
            if (ok) {
              break;
            }
          }
          if (ok) {
            live.insert(r);
            grew = true;
          }
        }
      }
      return live;
    }

    struct Node {
      Word        side[2];
      Word        real[2];
      std::size_t quad;
      std::size_t parent;  // npos for roots

      RemainderState state() const {
        bool const left_short = real[0].size() <= real[1].size();
        auto const& longer    = left_short ? real[1] : real[0];
        auto const& shorter   = left_short ? real[0] : real[1];
        return {longer.substr(shorter.size()), left_short ? Side::left : Side::right};
      }
      std::size_t covered() const {
        return std::max(real[0].size(), real[1].size());
      }
      bool complete() const {
        return real[0].size() == real[1].size();
      }
    };

    constexpr std::size_t npos = static_cast<std::size_t>(-1);

  }  // namespace

  DisjointReport has_disjoint_images(Language const& lang, DisjointOptions opts) {
    auto const& theta = lang.substitution();
    require_equal_lengths(theta);

    DisjointReport report;
    if (opts.constant_length_shortcut && constant_length(theta)) {
      report.method  = DisjointMethod::constant_length;
      report.witness = letter_image_overlap(lang);
      report.disjoint = !report.witness;
      return report;
    }
    report.method = DisjointMethod::remainder_search;

    auto const live = live_remainders(theta);

    std::vector<Quadruple> quads;
    for (std::size_t a = 0; a < theta.size(); ++a) {
      for (std::size_t b = 0; b < theta.size(); ++b) {
        if (a == b) {
          continue;
        }
        for (auto const& wa : theta.images(static_cast<Letter>(a))) {
          for (auto const& wb : theta.images(static_cast<Letter>(b))) {
            // equal images are listed once, under a < b
            if (wb.starts_with(wa) && (wa != wb || a < b)) {
              quads.push_back({static_cast<Letter>(a), static_cast<Letter>(b), wa, wb});
            }
          }
        }
      }
    }
    std::vector<QuadrupleTrace>   traces;
    std::vector<std::set<std::tuple<Word, Side>>> seen(quads.size());
    for (auto const& q : quads) {
      traces.push_back({q, {}});
    }

    std::vector<Node> arena;
    using Key = std::tuple<std::size_t, int, Word, Word, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    auto push = [&](Node node) {
      if (arena.size() >= opts.max_nodes) {
        throw Error("disjoint-images search exceeded its node budget");
      }
      auto lo = std::min(node.side[0], node.side[1]);
      auto hi = std::max(node.side[0], node.side[1]);
      queue.emplace(node.covered(), node.complete() ? 1 : 0, lo, hi, arena.size());
      arena.push_back(std::move(node));
    };

    for (std::size_t k = 0; k < quads.size(); ++k) {
      auto const& q = quads[k];
      Word        u{q.a}, v{q.b};
      if (!lang.is_legal(u) || !lang.is_legal(v)) {
        continue;
      }
      push(Node{{u, v}, {q.wa, q.wb}, k, npos});
    }

    auto const inflation = theta.inflation_words();
    while (!queue.empty()) {
      std::size_t const idx = std::get<4>(queue.top());
      queue.pop();
      Node const node = arena[idx];
      if (node.complete()) {
        report.disjoint = false;
        report.witness  = ordered(node.side[0], node.side[1], node.real[0]);
        return report;
      }
      auto const state = node.state();
      if (seen[node.quad].emplace(state.remainder, state.owing).second) {
        traces[node.quad].explored.push_back(state);
      }
      if (!live.contains(state.remainder)) {
        continue;
      }
      int const owing = state.owing == Side::left ? 0 : 1;
      for (auto const& [c, x] : inflation) {
        bool const fits  = x.size() <= state.remainder.size() && state.remainder.starts_with(x);
        bool const spill = x.size() > state.remainder.size() && x.starts_with(state.remainder);
        if (!fits && !spill) {
          continue;
        }
        Node child   = node;
        child.parent = idx;
        child.side[owing].push_back(c);
        child.real[owing] += x;
        if (!lang.is_legal(child.side[owing])) {
          continue;
        }
        if (!child.complete()) {
          // a state repeated along this path cannot lead anywhere new
          auto const s    = child.state();
          bool       loop = false;
          for (std::size_t p = idx; p != npos && !loop; p = arena[p].parent) {
            loop = arena[p].state() == s;
          }
          if (loop) {
            continue;
          }
        }
        push(std::move(child));
      }
    }
    report.disjoint    = true;
    report.certificate = std::move(traces);
    return report;
  }

  std::optional<Word> common_realisation(RandomSubstitution const& theta,
                                         Word const&               u,
                                         Word const&               v) {
    if (u.empty() || v.empty()) {
      throw InvalidArgument("common_realisation needs nonempty words");
    }
    struct State {
      std::size_t i, j;
      Word        r;
      Side        owing;
      auto        operator<=>(State const&) const = default;
    };
    struct Entry {
      State       s;
      std::size_t parent;
      Word        piece;  // letters appended to w by this move
    };
    std::vector<Entry> nodes{{State{0, 0, Word(), Side::left}, npos, Word()}};
    std::set<State>    visited{nodes[0].s};
    auto rebuild = [&](std::size_t k) {
      std::vector<Word const*> pieces;
      for (; k != npos; k = nodes[k].parent) {
        pieces.push_back(&nodes[k].piece);
      }
      Word w;
      for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
        w += **it;
      }
      return w;
    };
    for (std::size_t head = 0; head < nodes.size(); ++head) {
      State const s = nodes[head].s;
      auto        add = [&](State t, Word piece) {
        if (visited.insert(t).second) {
          nodes.push_back({std::move(t), head, std::move(piece)});
        }
      };
      if (s.r.empty()) {
        if (s.i == u.size() && s.j == v.size()) {
          return rebuild(head);
        }
        if (s.i == u.size() || s.j == v.size()) {
          continue;
        }
        for (auto const& x : theta.images(u[s.i])) {
          add({s.i + 1, s.j, x, Side::right}, x);
        }
        continue;
      }
      bool const        left = s.owing == Side::left;
      std::size_t const k    = left ? s.i : s.j;
      Word const&       src  = left ? u : v;
      if (k == src.size()) {
        continue;
      }
      for (auto const& y : theta.images(src[k])) {
        State t = s;
        (left ? t.i : t.j) += 1;
        if (y.size() <= s.r.size() && s.r.starts_with(y)) {
          t.r = s.r.substr(y.size());
          add(std::move(t), Word());
        } else if (y.size() > s.r.size() && y.starts_with(s.r)) {
          t.r     = y.substr(s.r.size());
          t.owing = left ? Side::right : Side::left;
          Word piece = t.r;
          add(std::move(t), std::move(piece));
        }
      }
    }
    return std::nullopt;
  }

  InflationReport has_disjoint_inflation_images(RandomSubstitution const& theta,
                                                std::size_t               m_max) {
    if (m_max == 0) {
      throw InvalidArgument("the inflation depth must be positive");
    }
    if (!is_compatible(theta)) {
      throw PreconditionError("disjoint inflation images need a compatible substitution");
    }
    InflationReport report;
    for (std::size_t m = 1; m <= m_max; ++m) {
      for (std::size_t a = 0; a < theta.size(); ++a) {
        auto words = apply_power(theta, Word{static_cast<Letter>(a)}, m);
        for (std::size_t i = 0; i < words.size(); ++i) {
          for (std::size_t j = i + 1; j < words.size(); ++j) {
            if (auto w = common_realisation(theta, words[i], words[j])) {
              report.violation = InflationViolation{m, static_cast<Letter>(a),
                                                    words[i], words[j], *w};
              report.checked_up_to = m;
              return report;
            }
          }
        }
      }
      report.checked_up_to = m;
    }
    return report;
  }

}  // namespace rsub
