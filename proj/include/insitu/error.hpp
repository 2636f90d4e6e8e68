#ifndef INSITU_ERROR_HPP
#define INSITU_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace insitu
{

// Every precondition violation in the library is reported as an Error
// carrying one of these kinds. The CLI maps them to exit codes.
enum class ErrorKind
{
    InvalidArgument,
    Overflow,
    IndexOutOfRange,
    NotBoolean,
    NotBijective,
    SignatureNotGroupable,
    NotRegular,
    SizesDoNotSum,
    NotDistanceCompatible,
    NotOrderPreserving,
    InvalidOrdering,
    BadLength,
    BadSum,
    BadChoice,
    NotSuffixCompatible,
    NotBlockSequence,
    BadSignature,
    ZeroColumn,
    NotInvertible,
    DimensionMismatch,
    TableTooLarge,
    BudgetExceeded,
    NotFound,
    ParseError,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotBoolean: return "NotBoolean";
    case ErrorKind::NotBijective: return "NotBijective";
    case ErrorKind::SignatureNotGroupable: return "SignatureNotGroupable";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::SizesDoNotSum: return "SizesDoNotSum";
    case ErrorKind::NotDistanceCompatible: return "NotDistanceCompatible";
    case ErrorKind::NotOrderPreserving: return "NotOrderPreserving";
    case ErrorKind::InvalidOrdering: return "InvalidOrdering";
    case ErrorKind::BadLength: return "BadLength";
    case ErrorKind::BadSum: return "BadSum";
    case ErrorKind::BadChoice: return "BadChoice";
    case ErrorKind::NotSuffixCompatible: return "NotSuffixCompatible";
    case ErrorKind::NotBlockSequence: return "NotBlockSequence";
    case ErrorKind::BadSignature: return "BadSignature";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TableTooLarge: return "TableTooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace insitu

#endif
