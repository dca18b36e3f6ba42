#include "rsub/report.hpp"

#include "rsub/error.hpp"

namespace rsub::report {

  namespace {

    json word(Alphabet const& A, Word const& w) {
      return A.format(w);
    }

    json opt_word(Alphabet const& A, std::optional<Word> const& w) {
      return w ? word(A, *w) : json(nullptr);
    }

    template <class T>
    json opt(std::optional<T> const& x) {
      return x ? json(*x) : json(nullptr);
    }

    json big(BigInt const& x) {
      if (x >= std::numeric_limits<std::int64_t>::min()
          && x <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(x);
      }
      return x.str();
    }

    // decoding helpers; nlohmann throws its own exceptions, which are
    // rethrown as ParseError so callers see one error type
    template <class F>
    auto decoding(F&& f) {
      try {
        return f();
      } catch (json::exception const& e) {
        throw ParseError(0, std::string("malformed report: ") + e.what());
      } catch (InvalidArgument const& e) {
        throw ParseError(0, std::string("malformed report: ") + e.what());
      }
    }

    Word parse_word(Alphabet const& A, json const& j) {
      return A.parse(j.get<std::string>());
    }

    std::optional<Word> parse_opt_word(Alphabet const& A, json const& j) {
      if (j.is_null()) {
        return std::nullopt;
      }
      return parse_word(A, j);
    }

    std::vector<Word> parse_words(Alphabet const& A, json const& j) {
      std::vector<Word> out;
      for (auto const& x : j) {
        out.push_back(parse_word(A, x));
      }
      return out;
    }

    template <class E>
    E enum_from(json const& j, std::initializer_list<E> all) {
      auto s = j.get<std::string>();
      for (E e : all) {
        if (to_string(e) == s) {
          return e;
        }
      }
      throw InvalidArgument("unknown value '" + s + "'");
    }

    template <class E>
    std::optional<E> opt_enum_from(json const& j, std::initializer_list<E> all) {
      if (j.is_null()) {
        return std::nullopt;
      }
      return enum_from(j, all);
    }

    template <class E>
    json opt_enum(std::optional<E> const& e) {
      return e ? json(to_string(*e)) : json(nullptr);
    }

  }  // namespace

  json words(Alphabet const& A, std::vector<Word> const& ws) {
    json out = json::array();
    for (auto const& w : ws) {
      out.push_back(word(A, w));
    }
    return out;
  }

  json compatibility(Alphabet const& A, CompatibilityReport const& c) {
    json out{{"compatible", c.compatible}, {"counterexample", nullptr}};
    if (c.counterexample) {
      auto const& ce           = *c.counterexample;
      out["counterexample"] = {{"letter", A.symbol(ce.letter)},
                               {"first", word(A, ce.first)},
                               {"second", word(A, ce.second)},
                               {"first_counts", ce.first_vector.counts},
                               {"second_counts", ce.second_vector.counts}};
    }
    return out;
  }

  json perron(PerronData const& p) {
    json matrix = json::array();
    for (std::size_t i = 0; i < p.matrix.dim(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < p.matrix.dim(); ++j) {
        row.push_back(p.matrix(i, j));
      }
      matrix.push_back(std::move(row));
    }
    json poly = json::array();
    for (auto const& c : p.characteristic_polynomial) {
      poly.push_back(big(c));
    }
    json normalized = json::array();
    for (auto const& q : p.r_normalized) {
      normalized.push_back(std::to_string(q.numerator()) + "/" + std::to_string(q.denominator()));
    }
    return {{"matrix", matrix},
            {"characteristic_polynomial", poly},
            {"lambda_approx", p.lambda_approx},
            {"lambda_integer", p.lambda_exact.has_value()},
            {"lambda_exact", opt(p.lambda_exact)},
            {"r_hat", opt(p.r_hat)},
            {"r_normalized", normalized},
            {"virtual_period", opt(p.virtual_period)}};
  }

  json disjoint(Alphabet const& A, DisjointReport const& r) {
    json out{{"disjoint", r.disjoint}, {"method", to_string(r.method)}, {"witness", nullptr}};
    if (r.witness) {
      out["witness"] = {{"u", word(A, r.witness->u)},
                        {"v", word(A, r.witness->v)},
                        {"w", word(A, r.witness->w)}};
    }
    json cert = json::array();
    for (auto const& t : r.certificate) {
      json explored = json::array();
      for (auto const& s : t.explored) {
        explored.push_back({{"remainder", word(A, s.remainder)}, {"owing", to_string(s.owing)}});
      }
      cert.push_back({{"a", A.symbol(t.start.a)},
                      {"b", A.symbol(t.start.b)},
                      {"wa", word(A, t.start.wa)},
                      {"wb", word(A, t.start.wb)},
                      {"explored", explored}});
    }
    out["certificate"] = cert;
    return out;
  }

  json inflation(Alphabet const& A, InflationReport const& r) {
    json out{{"disjoint", !r.violation}, {"checked_up_to", r.checked_up_to}, {"violation", nullptr}};
    if (r.violation) {
      auto const& v    = *r.violation;
      out["violation"] = {{"power", v.power},
                          {"letter", A.symbol(v.letter)},
                          {"u", word(A, v.u)},
                          {"v", word(A, v.v)},
                          {"w", word(A, v.w)}};
    }
    return out;
  }

  json decompositions(Alphabet const& A, std::vector<Decomposition> const& ds) {
    json out = json::array();
    for (auto const& d : ds) {
      out.push_back({{"preimage", word(A, d.preimage)},
                     {"cut_points", d.cut_points},
                     {"realisations", words(A, d.realisations)}});
    }
    return out;
  }

  json necessary(NecessaryConditions const& nc) {
    return {{"pass", nc.pass},
            {"failure", opt_enum(nc.failure)},
            {"virtual_period", opt(nc.virtual_period)},
            {"forced_counts", nc.forced ? json(nc.forced->counts) : json(nullptr)}};
  }

  json existence(Alphabet const& A, ExistenceReport const& r) {
    return {{"verdict", r.proven_empty ? "proven_empty" : "inconclusive"},
            {"proven_empty", r.proven_empty},
            {"reason", opt_enum(r.reason)},
            {"lambda_integer", r.lambda_integer},
            {"virtual_period", opt(r.virtual_period)},
            {"disjoint_images", opt(r.disjoint_images)},
            {"candidates", words(A, r.candidates)},
            {"unavoidable_set", words(A, r.unavoidable_set)},
            {"window", opt(r.window)}};
  }

  json block_verdict(Alphabet const& A, PeriodicBlockVerdict const& v) {
    json loop = json::array();
    for (auto const& s : v.loop) {
      loop.push_back({{"block", word(A, s.block)},
                      {"rotation", s.rotation},
                      {"power", s.power},
                      {"preimage", word(A, s.preimage)}});
    }
    json trace = json::array();
    for (auto const& e : v.trace) {
      trace.push_back({{"candidate", word(A, e.candidate)},
                       {"canonical", word(A, e.canonical)},
                       {"reason", to_string(e.reason)},
                       {"offending", opt_word(A, e.offending)},
                       {"successors", words(A, e.successors)},
                       {"depth", e.depth}});
    }
    return {{"decision", v.periodic ? "yes" : "no"},
            {"periodic", v.periodic},
            {"root", word(A, v.root)},
            {"root_power", v.root_power},
            {"loop", loop},
            {"repeated", v.periodic ? word(A, v.repeated) : json(nullptr)},
            {"trace", trace}};
  }

  json enumeration(Alphabet const& A, EnumerationReport const& r, bool with_blocks) {
    json orbits = json::object();
    for (auto [d, n] : r.orbit_counts) {
      orbits[std::to_string(d)] = n;
    }
    json out{{"period", r.period},
             {"path", to_string(r.path)},
             {"per_count", r.per_count},
             {"orbit_counts", orbits},
             {"orb_count", r.orbit_counts.contains(r.period) ? r.orbit_counts.at(r.period) : 0},
             {"necessary", necessary(r.necessary)}};
    if (with_blocks) {
      out["blocks"] = words(A, r.blocks);
    }
    return out;
  }

  json analysis(Analyzer const& an, std::size_t existence_window) {
    auto const& theta = an.substitution();
    auto const& A     = theta.alphabet();

    json rules = json::object();
    for (std::size_t a = 0; a < theta.size(); ++a) {
      rules[A.symbol(a)] = words(A, theta.images(static_cast<Letter>(a)));
    }
    auto const ell      = constant_length(theta);
    auto const exponent = primitivity_exponent(theta);
    json       out{{"alphabet", A.symbols()},
                   {"rules", rules},
                   {"compatibility", compatibility(A, an.compatibility())},
                   {"primitive", an.primitive()},
                   {"primitivity_exponent", opt(exponent)},
                   {"constant_length", opt(ell)},
                   {"perron", nullptr},
                   {"disjoint_images", nullptr},
                   {"existence", nullptr},
                   {"preconditions", nullptr}};
    try {
      an.require_primitive_compatible();
    } catch (PreconditionError const& e) {
      out["preconditions"] = e.what();
      return out;
    }
    out["perron"] = perron(an.perron());
    try {
      out["disjoint_images"] = disjoint(A, an.disjoint());
    } catch (PreconditionError const& e) {
      out["preconditions"] = e.what();
      return out;
    }
    out["existence"] = existence(A, emptiness_check(an, existence_window));
    return out;
  }

  DisjointReport disjoint_from(Alphabet const& A, json const& j) {
    return decoding([&] {
      DisjointReport r;
      r.disjoint = j.at("disjoint").get<bool>();
      r.method   = enum_from(j.at("method"),
                             {DisjointMethod::constant_length, DisjointMethod::remainder_search});
      if (auto const& w = j.at("witness"); !w.is_null()) {
        r.witness = DisjointWitness{parse_word(A, w.at("u")), parse_word(A, w.at("v")),
                                    parse_word(A, w.at("w"))};
      }
      for (auto const& t : j.at("certificate")) {
        auto a = A.index(t.at("a").get<std::string>());
        auto b = A.index(t.at("b").get<std::string>());
        if (!a || !b) {
          throw InvalidArgument("unknown letter in certificate");
        }
        QuadrupleTrace qt{{*a, *b, parse_word(A, t.at("wa")), parse_word(A, t.at("wb"))}, {}};
        for (auto const& s : t.at("explored")) {
          qt.explored.push_back({parse_word(A, s.at("remainder")),
                                 enum_from(s.at("owing"), {Side::left, Side::right})});
        }
        r.certificate.push_back(std::move(qt));
      }
      return r;
    });
  }

  ExistenceReport existence_from(Alphabet const& A, json const& j) {
    return decoding([&] {
      ExistenceReport r;
      r.proven_empty   = j.at("proven_empty").get<bool>();
      r.reason         = opt_enum_from(j.at("reason"), {EmptinessReason::irrational_lambda,
                                                        EmptinessReason::unavoidable_word});
      r.lambda_integer = j.at("lambda_integer").get<bool>();
      if (!j.at("virtual_period").is_null()) {
        r.virtual_period = j.at("virtual_period").get<std::int64_t>();
      }
      if (!j.at("disjoint_images").is_null()) {
        r.disjoint_images = j.at("disjoint_images").get<bool>();
      }
      r.candidates      = parse_words(A, j.at("candidates"));
      r.unavoidable_set = parse_words(A, j.at("unavoidable_set"));
      if (!j.at("window").is_null()) {
        r.window = j.at("window").get<std::size_t>();
      }
      return r;
    });
  }

  PeriodicBlockVerdict block_verdict_from(Alphabet const& A, json const& j) {
    return decoding([&] {
      PeriodicBlockVerdict v;
      v.periodic   = j.at("periodic").get<bool>();
      v.root       = parse_word(A, j.at("root"));
      v.root_power = j.at("root_power").get<std::size_t>();
      for (auto const& s : j.at("loop")) {
        v.loop.push_back({parse_word(A, s.at("block")), s.at("rotation").get<std::size_t>(),
                          s.at("power").get<std::size_t>(), parse_word(A, s.at("preimage"))});
      }
      if (auto w = parse_opt_word(A, j.at("repeated"))) {
        v.repeated = *w;
      }
      for (auto const& e : j.at("trace")) {
        TraceEntry t;
        t.candidate  = parse_word(A, e.at("candidate"));
        t.canonical  = parse_word(A, e.at("canonical"));
        t.reason     = enum_from(e.at("reason"),
                                 {BlockFailure::necessary_conditions, BlockFailure::illegal,
                                  BlockFailure::illegal_square, BlockFailure::no_decomposition,
                                  BlockFailure::exhausted});
        t.offending  = parse_opt_word(A, e.at("offending"));
        t.successors = parse_words(A, e.at("successors"));
        t.depth      = e.at("depth").get<std::size_t>();
        v.trace.push_back(std::move(t));
      }
      return v;
    });
  }

  EnumerationReport enumeration_from(Alphabet const& A, json const& j) {
    return decoding([&] {
      EnumerationReport r;
      r.period    = j.at("period").get<std::size_t>();
      r.path      = enum_from(j.at("path"), {EnumerationPath::none, EnumerationPath::fast,
                                             EnumerationPath::general});
      r.per_count = j.at("per_count").get<std::uint64_t>();
      for (auto const& [d, n] : j.at("orbit_counts").items()) {
        r.orbit_counts[std::stoull(d)] = n.get<std::uint64_t>();
      }
      if (j.contains("blocks")) {
        r.blocks = parse_words(A, j.at("blocks"));
      }
      auto const& nc     = j.at("necessary");
      r.necessary.pass    = nc.at("pass").get<bool>();
      r.necessary.failure = opt_enum_from(nc.at("failure"), {NecessaryFailure::irrational_lambda,
                                                             NecessaryFailure::period_not_multiple});
      if (!nc.at("virtual_period").is_null()) {
        r.necessary.virtual_period = nc.at("virtual_period").get<std::int64_t>();
      }
      if (!nc.at("forced_counts").is_null()) {
        r.necessary.forced = AbelianVector{nc.at("forced_counts").get<std::vector<std::uint64_t>>()};
      }
      return r;
    });
  }

  std::vector<Decomposition> decompositions_from(Alphabet const& A, json const& j) {
    return decoding([&] {
      std::vector<Decomposition> out;
      for (auto const& d : j) {
        out.push_back({parse_word(A, d.at("preimage")),
                       d.at("cut_points").get<std::vector<std::size_t>>(),
                       parse_words(A, d.at("realisations"))});
      }
      return out;
    });
  }

}  // namespace rsub::report
