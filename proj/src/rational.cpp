#include "glerg/rational.hpp"

#include <charconv>

namespace glerg {

const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::UnsupportedProduct: return "UnsupportedProduct";
    case ErrorKind::RefinementBudgetExceeded: return "RefinementBudgetExceeded";
    case ErrorKind::NotIntegerValued: return "NotIntegerValued";
    case ErrorKind::RangeEstimateUnstable: return "RangeEstimateUnstable";
    case ErrorKind::PieceExplosion: return "PieceExplosion";
    case ErrorKind::PointOnNoPiece: return "PointOnNoPiece";
    case ErrorKind::CutoffExceeded: return "CutoffExceeded";
    case ErrorKind::NoInteriorPiece: return "NoInteriorPiece";
    case ErrorKind::ComplexityRefusal: return "ComplexityRefusal";
    case ErrorKind::NonMonotoneWeight: return "NonMonotoneWeight";
    case ErrorKind::UnboundedRequired: return "UnboundedRequired";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::NonCommuting: return "NonCommuting";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

static std::int64_t parse_int(const std::string& s, std::size_t b, std::size_t e) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data() + b, s.data() + e, v);
    if (ec != std::errc() || p != s.data() + e)
        throw Error(ErrorKind::InvalidArgument, "bad rational '" + s + "'");
    return v;
}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s, 0, s.size()));
    return Rational(parse_int(s, 0, slash), parse_int(s, slash + 1, s.size()));
}

Rational Rational::round_dyadic(const Rational& x, int bits, bool down) {
    __int128 scaled = static_cast<__int128>(x.num_) << bits;
    __int128 q = scaled / x.den_;
    __int128 r = scaled % x.den_;
    if (r != 0) {
        if (down && scaled < 0) --q;
        if (!down && scaled > 0) ++q;
    }
    return make(q, static_cast<__int128>(1) << bits);
}

} // namespace glerg
