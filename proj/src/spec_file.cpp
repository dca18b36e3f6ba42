#include "rsub/spec_file.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "rsub/error.hpp"

namespace rsub {

  namespace {

    std::string_view trim(std::string_view s) {
      auto const ws = " \t\r\f\v";
      auto       b  = s.find_first_not_of(ws);
      if (b == std::string_view::npos) {
        return {};
      }
      return s.substr(b, s.find_last_not_of(ws) - b + 1);
    }

    std::vector<std::string_view> split(std::string_view s, char sep) {
      std::vector<std::string_view> out;
      for (;;) {
        auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) {
          return out;
        }
        s.remove_prefix(pos + 1);
      }
    }

    bool has_space(std::string_view s) {
      return s.find_first_of(" \t") != std::string_view::npos;
    }

  }  // namespace

  ParsedSpec parse_spec(std::string_view text) {
    std::optional<Alphabet>        alphabet;
    std::size_t                    alphabet_line = 0;
    std::vector<std::vector<Word>> images;
    std::vector<std::size_t>       rule_line;
    std::vector<std::string>       warnings;

    std::size_t lineno = 0;
    for (auto raw : split(text, '\n')) {
      ++lineno;
      auto line = trim(raw.substr(0, raw.find('#')));
      if (line.empty()) {
        continue;
      }

      if (line.starts_with("alphabet")) {
        auto rest = trim(line.substr(8));
        if (rest.empty() || rest.front() != ':') {
          throw ParseError(lineno, "syntax error: expected 'alphabet: <letters>'");
        }
        if (alphabet) {
          throw ParseError(lineno, "the alphabet is declared twice");
        }
        std::vector<std::string> symbols;
        std::istringstream       in{std::string(rest.substr(1))};
        for (std::string sym; in >> sym;) {
          symbols.push_back(sym);
        }
        if (symbols.empty()) {
          throw ParseError(lineno, "the alphabet declares no letters");
        }
        try {
          alphabet.emplace(symbols);
        } catch (InvalidArgument const& e) {
          throw ParseError(lineno, e.what());
        }
        alphabet_line = lineno;
        images.assign(alphabet->size(), {});
        rule_line.assign(alphabet->size(), 0);
        continue;
      }

      auto arrow = line.find("->");
      if (arrow == std::string_view::npos) {
        throw ParseError(lineno, "syntax error: expected '<letter> -> <word> | ...'");
      }
      if (!alphabet) {
        throw ParseError(lineno, "syntax error: rule before the alphabet declaration");
      }
      auto lhs = trim(line.substr(0, arrow));
      if (lhs.empty() || has_space(lhs)) {
        throw ParseError(lineno, "syntax error: a rule starts with exactly one letter");
      }
      auto letter = alphabet->index(lhs);
      if (!letter) {
        throw ParseError(lineno, "unknown letter '" + std::string(lhs) + "'");
      }
      if (rule_line[*letter] != 0) {
        throw ParseError(lineno, "second rule for letter '" + std::string(lhs)
                                     + "' (first on line "
                                     + std::to_string(rule_line[*letter]) + ")");
      }
      rule_line[*letter] = lineno;

      for (auto tok : split(line.substr(arrow + 2), '|')) {
        tok = trim(tok);
        if (tok.empty()) {
          throw ParseError(lineno, "empty image for letter '" + std::string(lhs) + "'");
        }
        if (has_space(tok)) {
          throw ParseError(lineno, "syntax error: image '" + std::string(tok)
                                       + "' contains whitespace");
        }
        Word w;
        try {
          w = alphabet->parse(tok);
        } catch (InvalidArgument const& e) {
          throw ParseError(lineno, e.what());
        }
        auto& set = images[*letter];
        if (std::find(set.begin(), set.end(), w) != set.end()) {
          warnings.push_back("line " + std::to_string(lineno) + ": duplicate image '"
                             + std::string(tok) + "' for letter '" + std::string(lhs)
                             + "' ignored");
          continue;
        }
        set.push_back(std::move(w));
      }
    }

    if (!alphabet) {
      throw ParseError(1, "missing 'alphabet:' declaration");
    }
    for (std::size_t a = 0; a < alphabet->size(); ++a) {
      if (rule_line[a] == 0) {
        throw ParseError(alphabet_line,
                         "missing rule for letter '" + alphabet->symbol(a) + "'");
      }
    }
    return {RandomSubstitution(*alphabet, std::move(images)), std::move(warnings)};
  }

  ParsedSpec parse_spec_file(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
  }

}  // namespace rsub
