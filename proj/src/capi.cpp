#include "rsub/rsub.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "rsub/error.hpp"
#include "rsub/periodic.hpp"
#include "rsub/report.hpp"
#include "rsub/spec_file.hpp"

struct rsub_substitution {
  rsub::ParsedSpec                parsed;
  std::unique_ptr<rsub::Analyzer> analyzer;
};

namespace {

  using rsub::report::json;

  thread_local std::string last_error;
  thread_local std::size_t last_line = 0;

  rsub_status fail(rsub_status s, std::string msg, std::size_t line = 0) {
    last_error = std::move(msg);
    last_line  = line;
    return s;
  }

  template <class F>
  rsub_status guarded(F&& f) {
    try {
      last_error.clear();
      last_line = 0;
      return f();
    } catch (rsub::ParseError const& e) {
      return fail(RSUB_PARSE_ERROR, e.what(), e.line());
    } catch (rsub::IoError const& e) {
      return fail(RSUB_IO_ERROR, e.what());
    } catch (rsub::PreconditionError const& e) {
      return fail(RSUB_PRECONDITION, e.what());
    } catch (rsub::InvalidArgument const& e) {
      return fail(RSUB_INVALID_ARGUMENT, e.what());
    } catch (std::bad_alloc const&) {
      return fail(RSUB_INTERNAL, "out of memory");
    } catch (std::exception const& e) {
      return fail(RSUB_INTERNAL, e.what());
    } catch (...) {
      return fail(RSUB_INTERNAL, "unknown failure");
    }
  }

  char* copy(std::string const& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) {
      throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
  }

  rsub_status emit(json const& j, char** out) {
    *out = copy(j.dump());
    return RSUB_OK;
  }

  rsub_status check(void const* sub, char** out) {
    if (!out) {
      return fail(RSUB_INVALID_ARGUMENT, "output pointer is NULL");
    }
    *out = nullptr;
    if (!sub) {
      return fail(RSUB_INVALID_ARGUMENT, "substitution handle is NULL");
    }
    return RSUB_OK;
  }

  rsub::Word parse_word(rsub_substitution const* sub, char const* text) {
    if (!text) {
      throw rsub::InvalidArgument("word is NULL");
    }
    return sub->analyzer->substitution().alphabet().parse(text);
  }

  rsub_status open(rsub::ParsedSpec parsed, rsub_substitution** out) {
    auto* sub     = new rsub_substitution{std::move(parsed), nullptr};
    sub->analyzer = std::make_unique<rsub::Analyzer>(sub->parsed.substitution);
    *out          = sub;
    return RSUB_OK;
  }

}  // namespace

extern "C" {

const char* rsub_version(void) {
  return "1.0.0";
}

const char* rsub_status_name(rsub_status status) {
  switch (status) {
    case RSUB_OK: return "ok";
    case RSUB_INVALID_ARGUMENT: return "invalid_argument";
    case RSUB_PARSE_ERROR: return "parse_error";
    case RSUB_IO_ERROR: return "io_error";
    case RSUB_PRECONDITION: return "precondition";
    case RSUB_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* rsub_last_error(void) {
  return last_error.c_str();
}

size_t rsub_last_error_line(void) {
  return last_line;
}

rsub_status rsub_from_file(const char* path, rsub_substitution** out) {
  return guarded([&] {
    if (!path || !out) {
      return fail(RSUB_INVALID_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    return open(rsub::parse_spec_file(path), out);
  });
}

rsub_status rsub_from_string(const char* text, rsub_substitution** out) {
  return guarded([&] {
    if (!text || !out) {
      return fail(RSUB_INVALID_ARGUMENT, "NULL argument");
    }
    *out = nullptr;
    return open(rsub::parse_spec(text), out);
  });
}

void rsub_free(rsub_substitution* sub) {
  delete sub;
}

rsub_status rsub_set_cache_dir(rsub_substitution* sub, const char* dir) {
  return guarded([&] {
    if (!sub) {
      return fail(RSUB_INVALID_ARGUMENT, "substitution handle is NULL");
    }
    rsub::LanguageOptions opts;
    if (dir) {
      opts.cache_dir = dir;
    }
    sub->analyzer = std::make_unique<rsub::Analyzer>(sub->parsed.substitution, opts);
    return RSUB_OK;
  });
}

rsub_status rsub_fingerprint(const rsub_substitution* sub, char** out) {
  return guarded([&] {
    if (auto s = check(sub, out)) {
      return s;
    }
    *out = copy(rsub::fingerprint(sub->parsed.substitution));
    return RSUB_OK;
  });
}

rsub_status rsub_warnings(const rsub_substitution* sub, char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    return emit(json(sub->parsed.warnings), out_json);
  });
}

rsub_status rsub_analyze(const rsub_substitution* sub, size_t existence_window,
                         char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    if (existence_window == 0) {
      return fail(RSUB_INVALID_ARGUMENT, "the existence window must be positive");
    }
    return emit(rsub::report::analysis(*sub->analyzer, existence_window), out_json);
  });
}

rsub_status rsub_legal(const rsub_substitution* sub, const char* word, char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    auto w = parse_word(sub, word);
    return emit({{"word", word}, {"length", w.size()}, {"legal", sub->analyzer->language().is_legal(w)}},
                out_json);
  });
}

rsub_status rsub_decompose(const rsub_substitution* sub, const char* word, char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    auto const& A  = sub->analyzer->substitution().alphabet();
    auto        ds = rsub::decompose(sub->analyzer->language(), parse_word(sub, word));
    return emit({{"word", word},
                 {"count", ds.size()},
                 {"unique", ds.size() == 1},
                 {"decompositions", rsub::report::decompositions(A, ds)}},
                out_json);
  });
}

rsub_status rsub_disjoint(const rsub_substitution* sub, size_t inflation_depth,
                          char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    auto const& an = *sub->analyzer;
    auto const& A  = an.substitution().alphabet();
    auto const& r  = an.disjoint();
    json        out{{"images", rsub::report::disjoint(A, r)}, {"inflation", nullptr}};
    out["images"]["witness_verified"] =
        r.witness ? json(rsub::verify_witness(an.language(), *r.witness)) : json(nullptr);
    if (inflation_depth > 0) {
      out["inflation"] = rsub::report::inflation(
          A, rsub::has_disjoint_inflation_images(an.substitution(), inflation_depth));
    }
    return emit(out, out_json);
  });
}

rsub_status rsub_exists(const rsub_substitution* sub, size_t window, char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    auto const& an = *sub->analyzer;
    auto        r  = rsub::emptiness_check(an, window);
    auto        j  = rsub::report::existence(an.substitution().alphabet(), r);
    j["depth"]     = window;
    return emit(j, out_json);
  });
}

rsub_status rsub_periodic_block(const rsub_substitution* sub, const char* word,
                                char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    auto const& an = *sub->analyzer;
    auto        v  = rsub::is_periodic_block(an, parse_word(sub, word));
    auto        j  = rsub::report::block_verdict(an.substitution().alphabet(), v);
    j["word"]      = word;
    j["certificate_verified"] =
        v.periodic ? json(rsub::verify_loop(an.substitution(), v)) : json(nullptr);
    return emit(j, out_json);
  });
}

rsub_status rsub_enumerate(const rsub_substitution* sub, size_t period, size_t jobs,
                           int count_only, char** out_json) {
  return guarded([&] {
    if (auto s = check(sub, out_json)) {
      return s;
    }
    if (period == 0) {
      return fail(RSUB_INVALID_ARGUMENT, "the period must be positive");
    }
    auto const& an = *sub->analyzer;
    auto        r  = rsub::enumerate_blocks(an, period, {.jobs = jobs == 0 ? 1 : jobs});
    return emit(rsub::report::enumeration(an.substitution().alphabet(), r, count_only == 0),
                out_json);
  });
}

void rsub_string_free(char* s) {
  std::free(s);
}

}  // extern "C"
