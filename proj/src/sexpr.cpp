#include "deepread/sexpr.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace deepread {

const std::string& Sexpr::head() const {
    static const std::string empty;
    if (!is_list() || items.empty() || !items[0].is_atom()) return empty;
    return items[0].text;
}

const Sexpr& Sexpr::at(size_t i) const {
    if (!is_list() || i >= items.size())
        throw std::out_of_range("sexpr item " + std::to_string(i) + " out of range");
    return items[i];
}

const std::string& Sexpr::str() const {
    if (is_list()) throw std::runtime_error("expected atom, got list (line " + std::to_string(line) + ")");
    return text;
}

double Sexpr::num() const {
    try {
        size_t pos = 0;
        double v = std::stod(str(), &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("expected number, got '" + text + "' (line " + std::to_string(line) + ")");
    }
}

namespace {

struct Reader {
    const std::string& src;
    const std::string& file;
    size_t pos = 0;
    int line = 1;

    bool eof() const { return pos >= src.size(); }
    char peek() const { return src[pos]; }
    char get() {
        char c = src[pos++];
        if (c == '\n') line++;
        return c;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                get();
            } else {
                break;
            }
        }
    }

    Sexpr read_form() {
        skip_ws();
        if (eof()) throw ParseError(file, line, "unexpected end of input");
        int start_line = line;
        char c = peek();
        if (c == '(') {
            get();
            Sexpr list;
            list.kind = Sexpr::Kind::List;
            list.line = start_line;
            while (true) {
                skip_ws();
                if (eof()) throw ParseError(file, start_line, "unterminated list");
                if (peek() == ')') {
                    get();
                    break;
                }
                list.items.push_back(read_form());
            }
            return list;
        }
        if (c == ')') throw ParseError(file, line, "unexpected ')'");
        if (c == '"') {
            get();
            Sexpr s;
            s.kind = Sexpr::Kind::String;
            s.line = start_line;
            while (true) {
                if (eof()) throw ParseError(file, start_line, "unterminated string");
                char ch = get();
                if (ch == '"') break;
                if (ch == '\\') {
                    if (eof()) throw ParseError(file, start_line, "unterminated escape");
                    char e = get();
                    if (e == 'n') ch = '\n';
                    else if (e == 't') ch = '\t';
                    else ch = e;
                }
                s.text.push_back(ch);
            }
            return s;
        }
        Sexpr atom;
        atom.kind = Sexpr::Kind::Atom;
        atom.line = start_line;
        while (!eof()) {
            char ch = peek();
            if (std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == '"' || ch == '#')
                break;
            atom.text.push_back(get());
        }
        return atom;
    }
};

}  // namespace

std::vector<Sexpr> parse_sexprs(const std::string& text, const std::string& file) {
    Reader r{text, file};
    std::vector<Sexpr> forms;
    while (true) {
        r.skip_ws();
        if (r.eof()) break;
        forms.push_back(r.read_form());
    }
    return forms;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Sexpr> parse_sexpr_file(const std::string& path) {
    return parse_sexprs(read_text_file(path), path);
}

}  // namespace deepread
