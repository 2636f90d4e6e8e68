#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace insitu;

namespace
{

std::string parse_error(const std::string &text, auto &&reader)
{
    std::istringstream in(text);
    try
    {
        reader(in);
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        return e.what();
    }
    ADD_FAILURE() << "no error thrown";
    return {};
}

} // namespace

TEST(TextIo, MappingRoundTrip)
{
    Rng rng(97);
    const Mapping e = random_mapping(Alphabet(3, 2), rng);
    std::istringstream in(to_text(e, write_mapping));
    EXPECT_EQ(read_mapping(in), e);
}

TEST(TextIo, MappingWithComments)
{
    std::istringstream in("# swap\n2 2  # header\n0 2\n1 3\n");
    EXPECT_EQ(read_mapping(in).images(), (std::vector<Index>{0, 2, 1, 3}));
}

TEST(TextIo, MatrixRoundTrip)
{
    std::istringstream in("12 2\n4 5\n6 4\n");
    const MatrixMod m = read_matrix(in);
    EXPECT_EQ(m.entries(), (Residues{4, 5, 6, 4}));
    EXPECT_EQ(to_text(m, write_matrix), "12 2\n4 5\n6 4\n");
}

TEST(TextIo, ProgramRoundTrip)
{
    Rng rng(101);
    const Program p = compile_4n_sorted(random_mapping(Alphabet(2, 3), rng));
    const std::string text = to_text(p, write_program);
    EXPECT_EQ(text.rfind("program 2 3 9\n", 0), 0u);
    std::istringstream in(text);
    EXPECT_EQ(read_program(in), p);
}

TEST(TextIo, LinearProgramRoundTrip)
{
    const LinearProgram p = decompose(MatrixMod(ModRing(12), 2, {4, 5, 6, 4}));
    const std::string text = to_text(p, write_linear_program);
    EXPECT_EQ(text, "linear 12 2 3\n1 10 9\n2 3 1\n1 1 11\n");
    std::istringstream in(text);
    const LinearProgram q = read_linear_program(in);
    EXPECT_EQ(q.matrix(), p.matrix());
    std::istringstream again(text);
    EXPECT_EQ(read_program(again), to_in_situ(p));
}

TEST(TextIo, ErrorsCarryLineNumbers)
{
    EXPECT_NE(parse_error("2 2\n0 1\n2 x\n", read_mapping).find("line 3"), std::string::npos);
    EXPECT_NE(parse_error("2 2\n0 1\n2 4\n", read_mapping).find("line 3"), std::string::npos);
    EXPECT_NE(parse_error("2 2\n0 1\n", read_mapping).find("end of input"), std::string::npos);
    EXPECT_NE(parse_error("2 2\n0 1 2 3\n9\n", read_mapping).find("line 3"), std::string::npos);
    EXPECT_NE(parse_error("1 2\n", read_mapping).find("line 1"), std::string::npos);
    EXPECT_NE(parse_error("12 2\n4 5\n6 12\n", read_matrix).find("line 3"), std::string::npos);
    EXPECT_NE(parse_error("program 2 1 1\n0 0 1\n", read_program).find("line 2"), std::string::npos);
    EXPECT_NE(parse_error("other 2 1 1\n", read_program).find("line 1"), std::string::npos);
    EXPECT_NE(parse_error("program 2 1 1\n1 0 1\n", read_linear_program).find("linear"), std::string::npos);
}
