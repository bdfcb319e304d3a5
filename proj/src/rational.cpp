#include "hopfcalc/rational.hpp"

#include <ostream>

namespace hopfcalc {

Rational Rational::parse(const std::string& s) {
    if (s.empty())
        throw input_error("empty rational literal");
    std::string num = s, den = "1";
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    auto digits_ok = [](const std::string& t, bool sign_ok) {
        if (t.empty())
            return false;
        size_t i = 0;
        if (sign_ok && (t[0] == '-' || t[0] == '+'))
            i = 1;
        if (i == t.size())
            return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9')
                return false;
        return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw input_error("bad rational literal '" + s + "'");
    mpq_class q;
    mpz_class n(num), d(den);
    if (d == 0)
        throw input_error("zero denominator in '" + s + "'");
    q = mpq_class(n) / mpq_class(d);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const {
    if (v_.get_den() == 1)
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace hopfcalc
