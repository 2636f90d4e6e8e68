#ifndef INSITU_TEXTIO_HPP
#define INSITU_TEXTIO_HPP

// Plain-text formats. All are whitespace-separated unsigned integers; '#'
// starts a comment that runs to the end of the line.
//
//   mapping         s n, then s^n image indices in input-index order
//   matrix          s n, then n rows of n residues
//   program         program s n m, then m lines: target, s^n table values
//   linear program  linear s n m, then m lines: target, n coefficients

#include "insitu/core.hpp"
#include "insitu/linmod.hpp"

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace insitu
{

namespace detail
{

class TokenReader
{
  public:
    explicit TokenReader(std::istream &in)
    {
        std::string line;
        std::size_t number = 0;
        while (std::getline(in, line))
        {
            ++number;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream words(line);
            std::string word;
            while (words >> word)
                tokens_.push_back({std::move(word), number});
        }
        last_line_ = number;
    }

    bool done() const { return next_ == tokens_.size(); }

    std::string word(const char *what)
    {
        if (done())
            fail(last_line_, std::string("unexpected end of input, expected ") + what);
        return tokens_[next_++].text;
    }

    std::uint64_t number(const char *what, std::uint64_t bound = std::numeric_limits<std::uint64_t>::max())
    {
        if (done())
            fail(last_line_, std::string("unexpected end of input, expected ") + what);
        const Token &t = tokens_[next_++];
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || end != t.text.data() + t.text.size())
            fail(t.line, "expected " + std::string(what) + ", got '" + t.text + "'");
        if (v >= bound)
            fail(t.line, std::string(what) + " " + t.text + " is not below " + std::to_string(bound));
        return v;
    }

    std::size_t line() const { return done() ? last_line_ : tokens_[next_].line; }

    void expect_end()
    {
        if (!done())
            fail(tokens_[next_].line, "unexpected trailing token '" + tokens_[next_].text + "'");
    }

    [[noreturn]] static void fail(std::size_t line, const std::string &message)
    {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message);
    }

  private:
    struct Token
    {
        std::string text;
        std::size_t line;
    };
    std::vector<Token> tokens_;
    std::size_t next_ = 0;
    std::size_t last_line_ = 0;
};

inline Alphabet read_alphabet(TokenReader &r)
{
    const std::size_t line = r.line();
    const auto s = r.number("alphabet size s");
    const auto n = r.number("arity n");
    try
    {
        Alphabet a(s, n);
        a.require_dense();
        return a;
    }
    catch (const Error &e)
    {
        TokenReader::fail(line, e.what());
    }
}

} // namespace detail

inline Mapping read_mapping(std::istream &in)
{
    detail::TokenReader r(in);
    const Alphabet a = detail::read_alphabet(r);
    std::vector<Index> images(a.size());
    for (auto &y : images)
        y = r.number("image index", a.size());
    r.expect_end();
    return Mapping(a, std::move(images));
}

inline MatrixMod read_matrix(std::istream &in)
{
    detail::TokenReader r(in);
    const auto s = r.number("modulus s");
    const auto n = r.number("dimension n");
    if (s < 2)
        detail::TokenReader::fail(1, "modulus must be at least 2");
    if (n < 1 || n > 4096)
        detail::TokenReader::fail(1, "dimension must lie in [1, 4096]");
    Residues entries(n * n);
    for (auto &v : entries)
        v = r.number("residue", s);
    r.expect_end();
    return MatrixMod(ModRing(s), n, std::move(entries));
}

inline Program read_program_body(detail::TokenReader &r)
{
    const Alphabet a = detail::read_alphabet(r);
    const auto m = r.number("assignment count");
    Program p(a);
    for (std::uint64_t k = 0; k < m; ++k)
    {
        const auto target = r.number("target component", a.n() + 1);
        if (target == 0)
            detail::TokenReader::fail(r.line(), "target component must be at least 1");
        std::vector<Digit> table(a.size());
        for (auto &v : table)
            v = static_cast<Digit>(r.number("table value", a.s()));
        p.push_back(Assignment(a, target, std::move(table)));
    }
    return p;
}

inline LinearProgram read_linear_body(detail::TokenReader &r)
{
    const auto s = r.number("modulus s");
    const auto n = r.number("dimension n");
    if (s < 2 || n < 1)
        detail::TokenReader::fail(r.line(), "linear program needs s >= 2 and n >= 1");
    const ModRing ring(s);
    const auto m = r.number("assignment count");
    LinearProgram p(ring, n);
    for (std::uint64_t k = 0; k < m; ++k)
    {
        const auto row = r.number("target component", n + 1);
        if (row == 0)
            detail::TokenReader::fail(r.line(), "target component must be at least 1");
        Residues c(n);
        for (auto &v : c)
            v = r.number("coefficient", s);
        p.push_back(AssignmentMatrix(ring, row, std::move(c)));
    }
    return p;
}

using AnyProgram = std::variant<Program, LinearProgram>;

// Dispatches on the leading keyword.
inline AnyProgram read_any_program(std::istream &in)
{
    detail::TokenReader r(in);
    const std::size_t line = r.line();
    const std::string kind = r.word("'program' or 'linear'");
    if (kind == "program")
    {
        Program p = read_program_body(r);
        r.expect_end();
        return p;
    }
    if (kind == "linear")
    {
        LinearProgram p = read_linear_body(r);
        r.expect_end();
        return p;
    }
    detail::TokenReader::fail(line, "expected 'program' or 'linear', got '" + kind + "'");
}

inline Program read_program(std::istream &in)
{
    AnyProgram p = read_any_program(in);
    if (auto *table = std::get_if<Program>(&p))
        return std::move(*table);
    return to_in_situ(std::get<LinearProgram>(p));
}

inline LinearProgram read_linear_program(std::istream &in)
{
    AnyProgram p = read_any_program(in);
    if (auto *linear = std::get_if<LinearProgram>(&p))
        return std::move(*linear);
    throw Error(ErrorKind::ParseError, "line 1: expected a linear program");
}

inline void write_mapping(std::ostream &out, const Mapping &e)
{
    const Alphabet &a = e.alphabet();
    out << a.s() << ' ' << a.n() << '\n';
    const Index per_line = a.s() <= 16 ? a.s() : 16;
    for (Index x = 0; x < e.size(); ++x)
        out << e(x) << ((x + 1) % per_line == 0 || x + 1 == e.size() ? '\n' : ' ');
}

inline void write_matrix(std::ostream &out, const MatrixMod &m)
{
    out << m.ring().modulus() << ' ' << m.n() << '\n';
    for (std::size_t i = 1; i <= m.n(); ++i)
        for (std::size_t j = 1; j <= m.n(); ++j)
            out << m(i, j) << (j == m.n() ? '\n' : ' ');
}

inline void write_program(std::ostream &out, const Program &p)
{
    const Alphabet &a = p.alphabet();
    out << "program " << a.s() << ' ' << a.n() << ' ' << p.length() << '\n';
    for (const auto &asg : p.assignments())
    {
        out << asg.target();
        for (Digit v : asg.table())
            out << ' ' << v;
        out << '\n';
    }
}

inline void write_linear_program(std::ostream &out, const LinearProgram &p)
{
    out << "linear " << p.ring().modulus() << ' ' << p.n() << ' ' << p.length() << '\n';
    for (const auto &f : p.factors())
    {
        out << f.row();
        for (Residue c : f.coefficients())
            out << ' ' << c;
        out << '\n';
    }
}

template <class T, class Writer> std::string to_text(const T &value, Writer &&write)
{
    std::ostringstream out;
    write(out, value);
    return out.str();
}

} // namespace insitu

#endif
