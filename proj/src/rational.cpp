#include "flagforge/rational.hpp"

#include <ostream>

namespace flagforge::exactring {

ExactRational::ExactRational(long num, long den) {
    if (den == 0)
        throw InvalidInput("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

ExactRational ExactRational::from_string(const std::string& s) {
    if (s.empty())
        throw InvalidInput("empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw InvalidInput("bad rational literal: " + s);
    if (q.get_den() == 0)
        throw InvalidInput("rational with zero denominator: " + s);
    q.canonicalize();
    return ExactRational(q);
}

ExactRational& ExactRational::operator/=(const ExactRational& o) {
    if (o.is_zero())
        throw InvalidInput("division by zero rational");
    v_ /= o.v_;
    return *this;
}

ExactRational ExactRational::inverse() const {
    if (is_zero())
        throw InvalidInput("inverse of zero rational");
    return ExactRational(mpq_class(1) / v_);
}

std::string ExactRational::str() const {
    return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
    return os << r.str();
}

} // namespace flagforge::exactring
