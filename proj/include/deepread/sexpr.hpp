// sexpr.hpp : small s-expression reader shared by the KB, lexicon and rule file formats
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace deepread {

// Thrown by all text-format loaders; carries the 1-based source line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)), line_(line) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

struct Sexpr {
    enum class Kind { Atom, String, List };
    Kind kind = Kind::Atom;
    std::string text;          // atom or string payload
    std::vector<Sexpr> items;  // list payload
    int line = 0;

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_string() const { return kind == Kind::String; }
    bool is_list() const { return kind == Kind::List; }

    // Head atom of a list, or "" when not a list/empty.
    const std::string& head() const;
    size_t size() const { return items.size(); }
    const Sexpr& at(size_t i) const;

    // Atom or string payload; throws when called on a list.
    const std::string& str() const;
    double num() const;
};

// Parses every top-level form in `text`. Comments run from '#' to end of line.
// `file` is used only for error messages.
std::vector<Sexpr> parse_sexprs(const std::string& text, const std::string& file = "<string>");

// Reads a whole file and parses it. Throws std::runtime_error if missing.
std::vector<Sexpr> parse_sexpr_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace deepread
