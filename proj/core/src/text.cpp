#include "drinfeld/text.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace drinfeld {

namespace {

/// Cursor over the input with whitespace skipping and positioned errors.
class Cursor {
public:
    Cursor(std::string_view s, const char* what) : s_(s), what_(what) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at_end() {
        skip_ws();
        return i_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++i_;
        return true;
    }
    bool accept(std::string_view word) {
        skip_ws();
        if (s_.substr(i_, word.size()) != word) return false;
        i_ += word.size();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    long long integer() {
        skip_ws();
        const size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ == start) fail("expected an integer");
        if (i_ - start > 9) fail("integer too large");
        return std::stoll(std::string(s_.substr(start, i_ - start)));
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidInput(std::string(what_) + ": " + msg + " at offset " + std::to_string(i_));
    }
    void finish() {
        if (!at_end()) fail("trailing characters");
    }

private:
    std::string_view s_;
    const char* what_;
    size_t i_ = 0;
};

uint8_t fq_value(const FiniteField& F, Cursor& c) {
    if (c.accept('[')) {
        std::vector<int> coords;
        do {
            const long long d = c.integer();
            if (d >= F.p()) c.fail("digit out of range for F_p");
            coords.push_back(static_cast<int>(d));
        } while (c.accept(','));
        c.expect(']');
        if (static_cast<int>(coords.size()) != F.r()) c.fail("wrong number of coordinates");
        return F.from_coords(coords);
    }
    const long long v = c.integer();
    if (F.r() != 1) c.fail("bracketed coordinates required when r > 1");
    if (v >= F.p()) c.fail("residue out of range for F_p");
    return static_cast<uint8_t>(v);
}

/// Exponent after an already consumed variable name.
int exponent(Cursor& c) {
    if (!c.accept('^')) return 1;
    const long long e = c.integer();
    if (e < 2) c.fail("exponent must be at least 2");
    return static_cast<int>(e);
}

FqPoly fq_poly(const FiniteField* F, Cursor& c, std::string_view var) {
    FqPoly r(F);
    if (c.peek() == '0') {
        // "0" alone is the zero polynomial; a bare 0 coefficient is never printed.
        const long long v = c.integer();
        if (v != 0) c.fail("unexpected coefficient");
        return r;
    }
    do {
        uint8_t coef = 1;
        int deg = 0;
        if (c.accept(var)) {
            deg = exponent(c);
        } else {
            coef = fq_value(*F, c);
            if (coef == 0) c.fail("zero coefficient");
            if (c.accept('*')) {
                if (!c.accept(var)) c.fail("expected variable");
                deg = exponent(c);
            }
        }
        if (r.coeff(deg) != 0) c.fail("repeated monomial");
        r += FqPoly::monomial(F, coef, deg);
    } while (c.accept('+'));
    return r;
}

BaseElement base_element(const CurvePtr& E, Cursor& c) {
    const FiniteField* F = E->field_ptr();
    c.expect('(');
    FqPoly n0 = fq_poly(F, c, "theta");
    c.expect(';');
    FqPoly n1 = fq_poly(F, c, "theta");
    c.expect(')');
    c.expect('/');
    FqPoly den = fq_poly(F, c, "theta");
    if (den.is_zero()) c.fail("zero denominator");
    return BaseElement::from_parts(E, std::move(n0), std::move(n1), std::move(den));
}

KPoly k_poly(const CurvePtr& E, Cursor& c) {
    const BaseElement zero = BaseElement::zero(E);
    KPoly r(zero);
    if (c.peek() == '0') {
        if (c.integer() != 0) c.fail("unexpected coefficient");
        return r;
    }
    do {
        c.expect('{');
        BaseElement coef = base_element(E, c);
        c.expect('}');
        int deg = 0;
        if (c.accept('*')) {
            if (!c.accept('t')) c.fail("expected t");
            deg = exponent(c);
        }
        if (coef.is_zero()) c.fail("zero coefficient");
        if (!r.coeff(deg).is_zero()) c.fail("repeated monomial");
        r += KPoly::monomial(coef, deg);
    } while (c.accept('+'));
    return r;
}

}  // namespace

uint8_t parse_fq(const FiniteField& F, std::string_view text) {
    Cursor c(text, "F_q element");
    const uint8_t v = fq_value(F, c);
    c.finish();
    return v;
}

FqPoly parse_fq_poly(const FiniteField* F, std::string_view text, std::string_view var) {
    Cursor c(text, "polynomial");
    FqPoly r = fq_poly(F, c, var);
    c.finish();
    return r;
}

BaseElement parse_base_element(const CurvePtr& E, std::string_view text) {
    Cursor c(text, "K element");
    BaseElement r = base_element(E, c);
    c.finish();
    return r;
}

CurveFunction parse_curve_function(const CurvePtr& E, std::string_view text) {
    Cursor c(text, "function");
    c.expect('(');
    KPoly A0 = k_poly(E, c);
    c.expect(';');
    KPoly A1 = k_poly(E, c);
    c.expect(')');
    c.expect('/');
    KPoly B = k_poly(E, c);
    if (B.is_zero()) c.fail("zero denominator");
    c.finish();
    return CurveFunction::from_parts(E, std::move(A0), std::move(A1), std::move(B));
}

CurvePoint parse_curve_point(const CurvePtr& E, std::string_view text) {
    Cursor c(text, "point");
    if (c.accept(std::string_view("inf"))) {
        c.finish();
        return CurvePoint::infinity();
    }
    c.expect('[');
    BaseElement x = base_element(E, c);
    c.expect(',');
    BaseElement y = base_element(E, c);
    c.expect(']');
    c.finish();
    return CurvePoint::affine(std::move(x), std::move(y));
}

}  // namespace drinfeld
