#pragma once

#include <stdexcept>
#include <string>

namespace icongloss {

/// Invalid data file content (ontology, dictionary, vetoes, rules, lexicon)
/// or a reference that cannot be satisfied by the loaded data.  Carries an
/// optional 1-based line number when the source is line oriented.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Malformed user input, e.g. an icon code that is not seven fields.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace icongloss
