#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace decbench::pipeline {

/// Argument-vector command with {placeholder} substitution. An element that
/// is exactly "{extra_flags}" expands to zero or more arguments; every other
/// placeholder substitutes text inside its element. "{{" and "}}" are
/// literal braces.
class CommandTemplate {
 public:
  CommandTemplate() = default;
  explicit CommandTemplate(std::vector<std::string> argv) : argv_(std::move(argv)) {}

  const std::vector<std::string>& argv() const { return argv_; }
  bool empty() const { return argv_.empty(); }

  /// Placeholder names referenced by the template. Throws Error(kTemplate)
  /// on unbalanced braces.
  std::set<std::string> placeholders() const;

  /// Problems found, empty when the template is usable.
  std::vector<std::string> check(const std::set<std::string>& allowed,
                                 const std::set<std::string>& required) const;

  std::vector<std::string> instantiate(const std::map<std::string, std::string>& values,
                                       const std::vector<std::string>& extra_flags = {}) const;

 private:
  std::vector<std::string> argv_;
};

inline const std::set<std::string>& encoder_placeholders() {
  static const std::set<std::string> names{"input",  "output", "qp",        "config",
                                           "width",  "height", "frames",    "framerate",
                                           "extra_flags", "bitdepth", "sequence"};
  return names;
}

inline const std::set<std::string>& decoder_placeholders() {
  static const std::set<std::string> names{"bitstream", "output", "width",    "height",
                                           "frames",    "framerate", "bitdepth", "sequence",
                                           "config",    "qp"};
  return names;
}

}  // namespace decbench::pipeline
