// Command-line driver. Talks to the library only through the C interface.
//
// Exit status: 0 success, 1 the analysis was refused (precondition) or
// failed internally, 2 usage error (bad flags, unreadable or malformed spec
// file, words outside the alphabet).

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsub/rsub.h"

using nlohmann::json;

namespace {

  struct Handle {
    rsub_substitution* p = nullptr;
    ~Handle() {
      rsub_free(p);
    }
  };

  struct Owned {
    char* s = nullptr;
    ~Owned() {
      rsub_string_free(s);
    }
  };

  int exit_code(rsub_status s) {
    switch (s) {
      case RSUB_OK: return 0;
      case RSUB_PRECONDITION:
      case RSUB_INTERNAL: return 1;
      default: return 2;
    }
  }

  // ---------------------------------------------------------------- text

  std::string join(json const& arr, std::string const& sep = ", ") {
    std::string out;
    for (auto const& x : arr) {
      if (!out.empty()) {
        out += sep;
      }
      out += x.is_string() ? x.get<std::string>() : x.dump();
    }
    return out;
  }

  std::string yes_no(json const& b) {
    return b.is_null() ? "n/a" : (b.get<bool>() ? "yes" : "no");
  }

  std::string polynomial(json const& coeffs) {
    std::string out;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      auto c = coeffs[k].is_string() ? coeffs[k].get<std::string>() : coeffs[k].dump();
      if (c == "0") {
        continue;
      }
      bool neg = c.front() == '-';
      if (neg) {
        c.erase(0, 1);
      }
      out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
      if (k == 0 || c != "1") {
        out += c;
      }
      if (k > 0) {
        out += k == 1 ? "x" : "x^" + std::to_string(k);
      }
    }
    return out;
  }

  void text_disjoint(std::ostream& os, json const& d) {
    os << "disjoint images: " << yes_no(d["disjoint"]) << " (" << d["method"].get<std::string>()
       << ")\n";
    if (!d["witness"].is_null()) {
      auto const& w = d["witness"];
      os << "  witness: " << w["w"].get<std::string>() << " realises both "
         << w["u"].get<std::string>() << " and " << w["v"].get<std::string>() << "\n";
    }
    if (!d["certificate"].empty()) {
      std::size_t states = 0;
      for (auto const& q : d["certificate"]) {
        states += q["explored"].size();
      }
      os << "  certificate: " << d["certificate"].size() << " start quadruples, " << states
         << " remainder states, none closes\n";
    }
  }

  void text_existence(std::ostream& os, json const& e) {
    os << "periodic points: " << e["verdict"].get<std::string>();
    if (!e["reason"].is_null()) {
      os << " (" << e["reason"].get<std::string>() << ")";
    }
    os << "\n";
    if (!e["window"].is_null()) {
      os << "  unavoidable set {" << join(e["unavoidable_set"]) << "} at length "
         << e["window"].dump() << "\n";
    }
    if (!e["virtual_period"].is_null()) {
      os << "  every period is a multiple of " << e["virtual_period"].dump() << "\n";
    }
  }

  void text_analyze(std::ostream& os, json const& r) {
    os << "alphabet: " << join(r["alphabet"], " ") << "\n";
    for (auto const& [letter, images] : r["rules"].items()) {
      os << "  " << letter << " -> " << join(images, " | ") << "\n";
    }
    os << "compatible: " << yes_no(r["compatibility"]["compatible"]) << "\n";
    if (auto const& ce = r["compatibility"]["counterexample"]; !ce.is_null()) {
      os << "  images " << ce["first"].get<std::string>() << " and "
         << ce["second"].get<std::string>() << " of " << ce["letter"].get<std::string>()
         << " differ in letter counts\n";
    }
    os << "primitive: " << yes_no(r["primitive"]);
    if (!r["primitivity_exponent"].is_null()) {
      os << " (exponent " << r["primitivity_exponent"].dump() << ")";
    }
    os << "\nconstant length: "
       << (r["constant_length"].is_null() ? std::string("no") : r["constant_length"].dump())
       << "\n";
    if (!r["preconditions"].is_null()) {
      os << "not analysed further: " << r["preconditions"].get<std::string>() << "\n";
    }
    if (auto const& p = r["perron"]; !p.is_null()) {
      os << "substitution matrix: " << p["matrix"].dump() << "\n";
      os << "characteristic polynomial: " << polynomial(p["characteristic_polynomial"]) << "\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g", p["lambda_approx"].get<double>());
      os << "expansion factor: " << buf
         << (p["lambda_integer"].get<bool>() ? " (integer)" : " (irrational)") << "\n";
      if (!p["r_hat"].is_null()) {
        os << "right eigenvector: (" << join(p["r_hat"]) << "), virtual period "
           << p["virtual_period"].dump() << "\n";
      }
    }
    if (!r["disjoint_images"].is_null()) {
      text_disjoint(os, r["disjoint_images"]);
    }
    if (!r["existence"].is_null()) {
      text_existence(os, r["existence"]);
    }
  }

  void text_block(std::ostream& os, json const& r) {
    os << r["word"].get<std::string>() << ": "
       << (r["periodic"].get<bool>() ? "periodic block" : "not a periodic block") << "\n";
    if (r["root_power"].get<std::size_t>() > 1) {
      os << "  primitive root " << r["root"].get<std::string>() << " (power "
         << r["root_power"].dump() << ")\n";
    }
    for (auto const& s : r["loop"]) {
      os << "  rotation " << s["rotation"].dump() << " of " << s["block"].get<std::string>()
         << "^" << s["power"].dump() << " lies in theta(" << s["preimage"].get<std::string>()
         << ")\n";
    }
    if (r["periodic"].get<bool>()) {
      os << "  loop closes at " << r["repeated"].get<std::string>() << "; certificate "
         << (r["certificate_verified"].get<bool>() ? "verified" : "INVALID") << "\n";
    }
    for (auto const& t : r["trace"]) {
      os << "  " << std::string(2 * t["depth"].get<std::size_t>(), ' ')
         << t["candidate"].get<std::string>() << ": " << t["reason"].get<std::string>();
      if (!t["offending"].is_null()) {
        os << " (" << t["offending"].get<std::string>() << ")";
      }
      os << "\n";
    }
  }

  void text_enumerate(std::ostream& os, json const& r) {
    os << "period " << r["period"].dump() << " (" << r["path"].get<std::string>() << " path)\n";
    os << "|Per_" << r["period"].dump() << "| = " << r["per_count"].dump() << "\n";
    os << "|Orb_" << r["period"].dump() << "| = " << r["orb_count"].dump() << "\n";
    if (!r["orbit_counts"].empty()) {
      // JSON object keys sort as strings
      std::map<std::size_t, std::string> by_length;
      for (auto const& [d, n] : r["orbit_counts"].items()) {
        by_length[std::stoull(d)] = n.dump();
      }
      os << "orbits by length:";
      for (auto const& [d, n] : by_length) {
        os << " " << d << ":" << n;
      }
      os << "\n";
    }
    if (!r["necessary"]["pass"].get<bool>()) {
      os << "no blocks: " << r["necessary"]["failure"].get<std::string>() << "\n";
    }
    if (r.contains("blocks")) {
      for (auto const& b : r["blocks"]) {
        os << b.get<std::string>() << "\n";
      }
    }
  }

  void render_text(std::ostream& os, std::string const& command, json const& r) {
    if (command == "analyze") {
      text_analyze(os, r);
    } else if (command == "legal") {
      os << r["word"].get<std::string>() << ": " << (r["legal"].get<bool>() ? "legal" : "illegal")
         << "\n";
    } else if (command == "decompose") {
      os << r["word"].get<std::string>() << ": " << r["count"].dump() << " decomposition(s)\n";
      for (auto const& d : r["decompositions"]) {
        os << "  " << d["preimage"].get<std::string>() << " -> " << join(d["realisations"], ".")
           << "\n";
      }
    } else if (command == "disjoint") {
      text_disjoint(os, r["images"]);
      if (auto const& inf = r["inflation"]; !inf.is_null()) {
        os << "disjoint inflation images up to power " << inf["checked_up_to"].dump() << ": "
           << yes_no(inf["disjoint"]) << "\n";
        if (auto const& v = inf["violation"]; !v.is_null()) {
          os << "  " << v["w"].get<std::string>() << " realises both " << v["u"].get<std::string>()
             << " and " << v["v"].get<std::string>() << " from theta^" << v["power"].dump() << "("
             << v["letter"].get<std::string>() << ")\n";
        }
      }
    } else if (command == "exists") {
      text_existence(os, r);
    } else if (command == "periodic-block") {
      text_block(os, r);
    } else if (command == "enumerate") {
      text_enumerate(os, r);
    }
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random substitutions: languages, disjoint images and periodic points"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rsub_version()));

  std::string file, word, format = "text", cache_dir;
  std::size_t depth = 16, inflation_depth = 0, period = 0, jobs = 1;
  bool        count_only = false, reproducible = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", file, "Substitution spec file")->required();
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--reproducible", reproducible, "Report elapsed_ms as 0");
    sub->add_option("--cache-dir", cache_dir, "Directory for cached legal-word tables");
    return sub;
  };

  auto* analyze = common(app.add_subcommand("analyze", "Structural summary of a substitution"));
  analyze->add_option("--depth", depth, "Longest window for the emptiness check")
      ->check(CLI::PositiveNumber);

  auto* legal = common(app.add_subcommand("legal", "Is a word legal?"));
  legal->add_option("word", word)->required();

  auto* decompose = common(app.add_subcommand("decompose", "Split a word into inflation words"));
  decompose->add_option("word", word)->required();

  auto* disjoint = common(app.add_subcommand("disjoint", "Disjoint-images decision"));
  disjoint->add_option("--inflation-depth", inflation_depth,
                       "Also check inflation images of theta^m(a) for m up to this depth");

  auto* exists = common(app.add_subcommand("exists", "Try to prove there are no periodic points"));
  exists->add_option("--depth", depth, "Longest window for the unavoidable-set search")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* block = common(app.add_subcommand("periodic-block", "Decide whether word^inf is in the subshift"));
  block->add_option("word", word)->required();

  auto* enumerate = common(app.add_subcommand("enumerate", "All periodic blocks of one length"));
  enumerate->add_option("--period", period, "Block length")->required()->check(CLI::PositiveNumber);
  enumerate->add_flag("--count-only", count_only, "Omit the block list");
  enumerate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  }

  auto* chosen  = app.get_subcommands().front();
  auto  command = chosen->get_name();

  json params{{"file", file}};
  if (command == "analyze" || command == "exists") {
    params["depth"] = depth;
  } else if (command == "disjoint") {
    params["inflation_depth"] = inflation_depth;
  } else if (command == "enumerate") {
    params["period"]     = period;
    params["count_only"] = count_only;
  } else {
    params["word"] = word;
  }

  json report{{"command", command},
              {"fingerprint", nullptr},
              {"params", params},
              {"result", nullptr},
              {"warnings", json::array()},
              {"error", nullptr},
              {"elapsed_ms", 0}};

  auto const start = std::chrono::steady_clock::now();
  auto       run   = [&]() -> rsub_status {
    Handle h;
    if (auto s = rsub_from_file(file.c_str(), &h.p)) {
      return s;
    }
    if (!cache_dir.empty()) {
      if (auto s = rsub_set_cache_dir(h.p, cache_dir.c_str())) {
        return s;
      }
    }
    Owned fp, warn, out;
    rsub_fingerprint(h.p, &fp.s);
    report["fingerprint"] = fp.s;
    rsub_warnings(h.p, &warn.s);
    report["warnings"] = json::parse(warn.s);

    rsub_status s = RSUB_OK;
    if (command == "analyze") {
      s = rsub_analyze(h.p, depth, &out.s);
    } else if (command == "legal") {
      s = rsub_legal(h.p, word.c_str(), &out.s);
    } else if (command == "decompose") {
      s = rsub_decompose(h.p, word.c_str(), &out.s);
    } else if (command == "disjoint") {
      s = rsub_disjoint(h.p, inflation_depth, &out.s);
    } else if (command == "exists") {
      s = rsub_exists(h.p, depth, &out.s);
    } else if (command == "periodic-block") {
      s = rsub_periodic_block(h.p, word.c_str(), &out.s);
    } else {
      s = rsub_enumerate(h.p, period, jobs, count_only ? 1 : 0, &out.s);
    }
    if (s == RSUB_OK) {
      report["result"] = json::parse(out.s);
    }
    return s;
  };
  rsub_status const status = run();
  if (!reproducible) {
    report["elapsed_ms"] = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  }
  if (status != RSUB_OK) {
    report["error"] = {{"status", rsub_status_name(status)}, {"message", rsub_last_error()}};
    if (auto line = rsub_last_error_line()) {
      report["error"]["line"] = line;
    }
  }

  if (format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    for (auto const& w : report["warnings"]) {
      std::cerr << "warning: " << w.get<std::string>() << "\n";
    }
    if (status == RSUB_OK) {
      render_text(std::cout, command, report["result"]);
    }
  }
  if (status != RSUB_OK) {
    std::cerr << "rsub " << command << ": " << rsub_last_error() << "\n";
  }
  return exit_code(status);
}
