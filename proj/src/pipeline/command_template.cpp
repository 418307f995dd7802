#include "decbench/pipeline/command_template.hpp"

#include "decbench/error.hpp"

namespace decbench::pipeline {

namespace {

constexpr const char* kExtraFlags = "extra_flags";

// Walks `text`, handing literal runs and placeholder names to the callbacks.
template <typename OnLiteral, typename OnName>
void scan(const std::string& text, OnLiteral on_literal, OnName on_name) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      on_literal('{');
      i += 2;
    } else if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      on_literal('}');
      i += 2;
    } else if (c == '{') {
      const auto close = text.find('}', i + 1);
      if (close == std::string::npos) {
        throw Error(Errc::kTemplate, "unterminated placeholder in '" + text + "'");
      }
      on_name(text.substr(i + 1, close - i - 1));
      i = close + 1;
    } else if (c == '}') {
      throw Error(Errc::kTemplate, "stray '}' in '" + text + "'");
    } else {
      on_literal(c);
      ++i;
    }
  }
}

}  // namespace

std::set<std::string> CommandTemplate::placeholders() const {
  std::set<std::string> names;
  for (const auto& arg : argv_) {
    scan(arg, [](char) {}, [&](const std::string& n) { names.insert(n); });
  }
  return names;
}

std::vector<std::string> CommandTemplate::check(const std::set<std::string>& allowed,
                                                const std::set<std::string>& required) const {
  std::vector<std::string> problems;
  if (argv_.empty()) {
    problems.emplace_back("command is empty");
    return problems;
  }
  std::set<std::string> names;
  try {
    names = placeholders();
  } catch (const Error& e) {
    problems.emplace_back(e.what());
    return problems;
  }
  for (const auto& n : names) {
    if (!allowed.count(n)) problems.push_back("unknown placeholder {" + n + "}");
  }
  for (const auto& n : required) {
    if (!names.count(n)) problems.push_back("missing required placeholder {" + n + "}");
  }
  for (const auto& arg : argv_) {
    if (arg != "{extra_flags}" && arg.find("{extra_flags}") != std::string::npos) {
      problems.emplace_back("{extra_flags} must be a whole argument");
    }
  }
  return problems;
}

std::vector<std::string> CommandTemplate::instantiate(
    const std::map<std::string, std::string>& values,
    const std::vector<std::string>& extra_flags) const {
  std::vector<std::string> out;
  for (const auto& arg : argv_) {
    if (arg == std::string("{") + kExtraFlags + "}") {
      out.insert(out.end(), extra_flags.begin(), extra_flags.end());
      continue;
    }
    std::string expanded;
    scan(
        arg, [&](char c) { expanded.push_back(c); },
        [&](const std::string& name) {
          auto it = values.find(name);
          if (it == values.end()) {
            throw Error(Errc::kTemplate, "no value for placeholder {" + name + "}");
          }
          expanded += it->second;
        });
    out.push_back(std::move(expanded));
  }
  return out;
}

}  // namespace decbench::pipeline
