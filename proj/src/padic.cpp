#include "pvl/padic.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace pvl {

namespace {

constexpr std::int64_t kMaxPrime = (std::int64_t{1} << 31) - 1;

void check_prime(std::int64_t p) {
    if (p < 2 || p > kMaxPrime) {
        throw std::invalid_argument("prime must be in [2, 2^31)");
    }
}

BigInt pow_int(std::int64_t p, std::size_t e) {
    BigInt r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= p;
    return r;
}

std::vector<std::uint32_t> integer_to_digits(std::int64_t p, BigInt u, std::size_t m) {
    BigInt mod = pow_int(p, m);
    u %= mod;
    if (u < 0) u += mod;
    std::vector<std::uint32_t> digits(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        digits[i] = static_cast<std::uint32_t>(u % p);
        u /= p;
    }
    return digits;
}

}  // namespace

std::int64_t Valuation::value() const {
    if (at_least_) throw std::logic_error("valuation is a lower bound, not an exact value");
    return bound_;
}

bool Valuation::consistent_with(const Valuation& o) const {
    if (!at_least_ && !o.at_least_) return bound_ == o.bound_;
    if (at_least_ && o.at_least_) return true;
    const Valuation& exact = at_least_ ? o : *this;
    const Valuation& bound = at_least_ ? *this : o;
    return exact.bound_ >= bound.bound_;
}

std::string Valuation::to_string() const {
    if (at_least_) return "AtLeast(" + std::to_string(bound_) + ")";
    return std::to_string(bound_);
}

Valuation Valuation::parse(std::string_view text) {
    if (text.starts_with("AtLeast(") && text.ends_with(")")) {
        std::string inner(text.substr(8, text.size() - 9));
        return at_least(std::stoll(inner));
    }
    return exactly(std::stoll(std::string(text)));
}

Valuation operator+(const Valuation& a, const Valuation& b) {
    bool al = a.at_least_ || b.at_least_;
    std::int64_t s = a.bound_ + b.bound_;
    return al ? Valuation::at_least(s) : Valuation::exactly(s);
}

Valuation val_min(const Valuation& a, const Valuation& b) {
    if (a.is_exact() && b.is_exact()) {
        return Valuation::exactly(std::min(a.value(), b.value()));
    }
    if (a.is_exact() && a.value() <= b.lower_bound()) return a;
    if (b.is_exact() && b.value() <= a.lower_bound()) return b;
    return Valuation::at_least(std::min(a.lower_bound(), b.lower_bound()));
}

PadicApprox::PadicApprox(std::int64_t p, std::int64_t shift, std::vector<std::uint32_t> digits)
    : p_(p), shift_(shift), digits_(std::move(digits)) {
    check_prime(p);
    if (digits_.empty() || digits_.size() > kMaxPrecision) {
        throw std::invalid_argument("precision must be in [1, 64]");
    }
    for (std::uint32_t d : digits_) {
        if (d >= static_cast<std::uint64_t>(p)) {
            throw std::invalid_argument("digit out of range for base p");
        }
    }
}

PadicApprox PadicApprox::zero(std::int64_t p, std::size_t precision, std::int64_t shift) {
    return PadicApprox(p, shift, std::vector<std::uint32_t>(precision, 0));
}

PadicApprox PadicApprox::from_integer(std::int64_t p, const BigInt& value, std::size_t precision) {
    return PadicApprox(p, 0, integer_to_digits(p, value, precision));
}

bool PadicApprox::is_zero_at_precision() const {
    return std::all_of(digits_.begin(), digits_.end(), [](std::uint32_t d) { return d == 0; });
}

PadicApprox PadicApprox::normalized() const {
    std::int64_t s = shift_;
    std::size_t drop = 0;
    while (s > 0 && drop < digits_.size() - 1 && digits_[drop] == 0) {
        --s;
        ++drop;
    }
    if (drop == 0) return *this;
    std::vector<std::uint32_t> d(digits_.begin() + static_cast<std::ptrdiff_t>(drop), digits_.end());
    return PadicApprox(p_, s, std::move(d));
}

Valuation PadicApprox::val() const {
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (digits_[i] != 0) {
            return Valuation::exactly(static_cast<std::int64_t>(i) - shift_);
        }
    }
    return Valuation::at_least(static_cast<std::int64_t>(digits_.size()) - shift_);
}

BigInt PadicApprox::unit_as_integer() const {
    BigInt u = 0;
    for (std::size_t i = digits_.size(); i-- > 0;) {
        u = u * p_ + digits_[i];
    }
    return u;
}

namespace {

void check_same_prime(const PadicApprox& x, const PadicApprox& y) {
    if (x.prime() != y.prime()) throw std::invalid_argument("prime mismatch");
}

std::size_t clamp_precision(std::int64_t m) {
    if (m < 1) m = 1;
    if (m > static_cast<std::int64_t>(PadicApprox::kMaxPrecision)) {
        m = PadicApprox::kMaxPrecision;
    }
    return static_cast<std::size_t>(m);
}

}  // namespace

PadicApprox add(const PadicApprox& x, const PadicApprox& y) {
    check_same_prime(x, y);
    const std::int64_t p = x.prime();
    const std::int64_t shift = std::max(x.shift(), y.shift());
    const std::int64_t up_x = shift - x.shift();
    const std::int64_t up_y = shift - y.shift();
    // After aligning, each operand determines the sum modulo p^(m_i + up_i);
    // the overlap window is the smaller of the two.
    const std::int64_t m =
        std::min(static_cast<std::int64_t>(x.precision()) + up_x,
                 static_cast<std::int64_t>(y.precision()) + up_y);
    const std::size_t prec = clamp_precision(m);

    std::vector<std::uint32_t> out(prec, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < prec; ++i) {
        std::uint64_t s = carry;
        std::int64_t ix = static_cast<std::int64_t>(i) - up_x;
        std::int64_t iy = static_cast<std::int64_t>(i) - up_y;
        if (ix >= 0 && ix < static_cast<std::int64_t>(x.precision())) {
            s += x.digits()[static_cast<std::size_t>(ix)];
        }
        if (iy >= 0 && iy < static_cast<std::int64_t>(y.precision())) {
            s += y.digits()[static_cast<std::size_t>(iy)];
        }
        out[i] = static_cast<std::uint32_t>(s % static_cast<std::uint64_t>(p));
        carry = s / static_cast<std::uint64_t>(p);
    }
    return PadicApprox(p, shift, std::move(out));
}

PadicApprox neg(const PadicApprox& x) {
    const std::int64_t p = x.prime();
    std::vector<std::uint32_t> out(x.precision(), 0);
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < x.precision(); ++i) {
        // (p^m - u) digit by digit.
        std::uint64_t d = x.digits()[i] + borrow;
        if (d == 0) {
            out[i] = 0;
            borrow = 0;
        } else {
            out[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(p) - d);
            borrow = 1;
        }
    }
    return PadicApprox(p, x.shift(), std::move(out));
}

PadicApprox sub(const PadicApprox& x, const PadicApprox& y) {
    return add(x, neg(y));
}

PadicApprox mul(const PadicApprox& x, const PadicApprox& y) {
    check_same_prime(x, y);
    const std::int64_t p = x.prime();

    if (x.is_zero_at_precision() || y.is_zero_at_precision()) {
        return PadicApprox::zero(p, std::min(x.precision(), y.precision()),
                                 x.shift() + y.shift());
    }

    const std::size_t a = static_cast<std::size_t>(x.val().value() + x.shift());
    const std::size_t b = static_cast<std::size_t>(y.val().value() + y.shift());
    const std::size_t prec = std::min(x.precision() - a, y.precision() - b);

    // Schoolbook product of the unit parts, truncated to prec digits.
    std::vector<unsigned __int128> acc(prec, 0);
    for (std::size_t i = 0; i < prec; ++i) {
        const std::uint64_t dx = x.digits()[a + i];
        if (dx == 0) continue;
        for (std::size_t j = 0; i + j < prec && j < y.precision() - b; ++j) {
            acc[i + j] += static_cast<unsigned __int128>(dx) * y.digits()[b + j];
        }
    }
    std::vector<std::uint32_t> out(prec, 0);
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < prec; ++i) {
        unsigned __int128 s = acc[i] + carry;
        out[i] = static_cast<std::uint32_t>(s % static_cast<std::uint64_t>(p));
        carry = s / static_cast<std::uint64_t>(p);
    }
    const std::int64_t shift = x.shift() + y.shift() - static_cast<std::int64_t>(a) -
                               static_cast<std::int64_t>(b);
    return PadicApprox(p, shift, std::move(out));
}

PadicApprox inv_unit(const PadicApprox& x) {
    const std::int64_t p = x.prime();
    if (x.digits()[0] == 0) {
        throw std::domain_error("not a unit at this precision");
    }
    const std::size_t m = x.precision();

    // Inverse of the leading digit mod p by extended Euclid.
    std::int64_t a = x.digits()[0], mo = p, x0 = 1, x1 = 0;
    while (mo != 0) {
        std::int64_t q = a / mo;
        std::int64_t t = a - q * mo;
        a = mo;
        mo = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    std::int64_t w0 = x0 % p;
    if (w0 < 0) w0 += p;

    // Lift one digit at a time: maintain u*w == 1 mod p^k.
    const BigInt u = x.unit_as_integer();
    BigInt w = w0;
    BigInt pk = p;
    for (std::size_t k = 1; k < m; ++k) {
        BigInt pk1 = pk * p;
        BigInt r = (1 - u * w) % pk1;
        if (r < 0) r += pk1;
        BigInt c = ((r / pk) * w0) % p;
        w = (w + c * pk) % pk1;
        pk = pk1;
    }
    return PadicApprox(p, -x.shift(), integer_to_digits(p, w, m));
}

bool ball_contains(const Ball& ball, const PadicApprox& x) {
    PadicApprox d = sub(x, ball.center);
    const std::int64_t window = static_cast<std::int64_t>(d.precision()) - d.shift();
    if (ball.radius > window) {
        throw std::domain_error("insufficient precision");
    }
    return d.val().definitely_ge(ball.radius);
}

std::string PadicApprox::to_text() const {
    std::ostringstream out;
    out << p_ << "^" << -shift_ << " * (";
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i > 0) out << " + ";
        out << digits_[i];
        if (i == 1) out << "*" << p_;
        if (i > 1) out << "*" << p_ << "^" << i;
    }
    out << ") [prec " << digits_.size() << "]";
    return out.str();
}

namespace {

struct TextCursor {
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && s[pos] == ' ') ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw std::invalid_argument("malformed p-adic literal");
    }
    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        std::int64_t v = 0;
        auto res = std::from_chars(s.data() + start, s.data() + pos, v);
        if (res.ec != std::errc() || start == pos) {
            throw std::invalid_argument("malformed p-adic literal");
        }
        return v;
    }
};

}  // namespace

PadicApprox PadicApprox::parse_text(std::string_view text) {
    TextCursor c{text};
    std::int64_t p = c.integer();
    c.expect('^');
    std::int64_t k = c.integer();
    c.expect('*');
    c.expect('(');
    std::vector<std::uint32_t> digits;
    for (;;) {
        std::int64_t d = c.integer();
        if (d < 0) throw std::invalid_argument("malformed p-adic literal");
        digits.push_back(static_cast<std::uint32_t>(d));
        if (c.eat('*')) {
            std::int64_t base = c.integer();
            if (base != p) throw std::invalid_argument("malformed p-adic literal");
            if (c.eat('^')) c.integer();
        }
        if (c.eat(')')) break;
        c.expect('+');
    }
    c.expect('[');
    c.skip_ws();
    if (c.s.substr(c.pos, 4) != "prec") throw std::invalid_argument("malformed p-adic literal");
    c.pos += 4;
    std::int64_t m = c.integer();
    c.expect(']');
    if (m != static_cast<std::int64_t>(digits.size())) {
        throw std::invalid_argument("declared precision disagrees with digit count");
    }
    return PadicApprox(p, -k, std::move(digits));
}

}  // namespace pvl
