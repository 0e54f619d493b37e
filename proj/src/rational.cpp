#include "seqcomplex/rational.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace seqcomplex {

std::string rat_to_string(const Rat& r) {
    std::ostringstream out;
    out << numerator(r);
    if (denominator(r) != 1) out << "/" << denominator(r);
    return out.str();
}

Rat rat_from_string(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + text);
        return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string head = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        if (!frac.empty() && (frac.find('-') != std::string::npos || frac.find('+') != std::string::npos))
            throw std::invalid_argument("bad rational literal: " + text);
        BigInt ipart = head.empty() || head == "-" || head == "+" ? BigInt(0) : BigInt(head);
        BigInt scale = 1;
        BigInt fpart = 0;
        for (char c : frac) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad rational literal: " + text);
            fpart = fpart * 10 + (c - '0');
            scale *= 10;
        }
        Rat value = Rat(ipart < 0 ? -ipart : ipart) + Rat(fpart, scale);
        if (neg) value = -value;
        return value;
    }
    return Rat(BigInt(s));
}

}  // namespace seqcomplex
