#include "hgl/logic.hpp"

#include <algorithm>
#include <cassert>

namespace hgl {

namespace words {

void blit(Word* dst, std::uint32_t dst_off, const Word* src, std::size_t src_words,
          std::uint32_t src_off, std::uint32_t count) {
    for (std::uint32_t i = 0; i < count; ++i) {
        bool b = bit(src, src_words, src_off + i);
        set_bit(dst, dst_off + i, b);
    }
}

void add(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out,
         std::uint32_t out_width) {
    std::size_t n = count(out_width);
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        unsigned __int128 s = carry + get(a, na, i);
        s += get(b, nb, i);
        out[i] = static_cast<Word>(s);
        carry = s >> kBits;
    }
    mask_tail(out, n, out_width);
}

void sub(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out,
         std::uint32_t out_width) {
    std::size_t n = count(out_width);
    unsigned __int128 carry = 1;
    for (std::size_t i = 0; i < n; ++i) {
        unsigned __int128 s = carry + get(a, na, i);
        s += ~get(b, nb, i);
        out[i] = static_cast<Word>(s);
        carry = s >> kBits;
    }
    mask_tail(out, n, out_width);
}

void mul(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out,
         std::uint32_t out_width) {
    std::size_t n = count(out_width);
    std::vector<Word> acc(n, 0);
    for (std::size_t i = 0; i < na && i < n; ++i) {
        if (!a[i]) continue;
        Word carry = 0;
        for (std::size_t j = 0; j + i < n; ++j) {
            unsigned __int128 cur = acc[i + j];
            if (j < nb) cur += static_cast<unsigned __int128>(a[i]) * b[j];
            cur += carry;
            acc[i + j] = static_cast<Word>(cur);
            carry = static_cast<Word>(cur >> kBits);
        }
    }
    std::copy(acc.begin(), acc.end(), out);
    mask_tail(out, n, out_width);
}

int ucmp(const Word* a, std::size_t na, const Word* b, std::size_t nb) {
    std::size_t n = std::max(na, nb);
    for (std::size_t i = n; i-- > 0;) {
        Word wa = get(a, na, i);
        Word wb = get(b, nb, i);
        if (wa != wb) return wa < wb ? -1 : 1;
    }
    return 0;
}

void divmod(const Word* a, const Word* b, Word* q, Word* r, std::uint32_t width) {
    std::size_t n = count(width);
    std::fill(q, q + n, 0);
    std::fill(r, r + n, 0);
    for (std::uint32_t i = width; i-- > 0;) {
        // r = (r << 1) | a[i]
        Word carry = bit(a, n, i) ? 1 : 0;
        for (std::size_t w = 0; w < n; ++w) {
            Word next = r[w] >> (kBits - 1);
            r[w] = (r[w] << 1) | carry;
            carry = next;
        }
        if (ucmp(r, n, b, n) >= 0) {
            sub(r, n, b, n, r, width);
            set_bit(q, i, true);
        }
    }
}

}  // namespace words

// ---------------------------------------------------------------------------
// Logic

void Logic::canonicalize() {
    std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i) v_[i] &= ~x_[i];
    words::mask_tail(v_.data(), n, width_);
    words::mask_tail(x_.data(), n, width_);
}

Logic Logic::ones(std::uint32_t width) {
    Logic l(width);
    std::fill(l.v_.begin(), l.v_.end(), ~std::uint64_t{0});
    words::mask_tail(l.v_.data(), l.v_.size(), width);
    return l;
}

Logic Logic::all_x(std::uint32_t width) {
    Logic l(width);
    std::fill(l.x_.begin(), l.x_.end(), ~std::uint64_t{0});
    words::mask_tail(l.x_.data(), l.x_.size(), width);
    return l;
}

bool Logic::is_all_x() const {
    for (std::size_t i = 0; i < x_.size(); ++i) {
        std::uint64_t expect =
            i + 1 == x_.size() ? words::tail_mask(width_) : ~std::uint64_t{0};
        if (x_[i] != expect) return false;
    }
    return true;
}

Logic Logic::from_uint(std::uint64_t value, std::uint32_t width) {
    Logic l(width);
    l.v_[0] = value;
    if (width < words::kBits && (value >> width) != 0)
        throw Error("value " + std::to_string(value) + " does not fit in " +
                    std::to_string(width) + " bits");
    return l;
}

Logic Logic::from_planes(std::uint32_t width, std::vector<std::uint64_t> v,
                         std::vector<std::uint64_t> x) {
    Logic l(width);
    v.resize(l.v_.size(), 0);
    x.resize(l.x_.size(), 0);
    l.v_ = std::move(v);
    l.x_ = std::move(x);
    l.canonicalize();
    return l;
}

int Logic::bit(std::uint32_t i) const {
    if (i >= width_) return 2;  // out of range reads X
    if (words::bit(x_.data(), x_.size(), i)) return 2;
    return words::bit(v_.data(), v_.size(), i) ? 1 : 0;
}

void Logic::set_bit(std::uint32_t i, int value) {
    if (i >= width_) throw Error("set_bit out of range");
    words::set_bit(v_.data(), i, value == 1);
    words::set_bit(x_.data(), i, value == 2);
}

std::uint64_t Logic::to_uint() const {
    if (has_x()) throw Error("to_uint on a value with X bits");
    if (width_ > 64) {
        for (std::size_t i = 1; i < v_.size(); ++i)
            if (v_[i]) throw Error("to_uint overflow");
    }
    return v_[0];
}

std::string Logic::str() const {
    std::string s = std::to_string(width_) + "'b";
    for (std::uint32_t i = width_; i-- > 0;) {
        int b = bit(i);
        s += b == 2 ? 'x' : static_cast<char>('0' + b);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Literal parsing

namespace {

struct LiteralText {
    std::uint32_t width;
    char base;
    std::string_view digits;
};

LiteralText split_literal(std::string_view text) {
    std::size_t tick = text.find('\'');
    if (tick == std::string_view::npos || tick == 0 || tick + 2 > text.size())
        throw Error("malformed literal: " + std::string(text));
    std::uint64_t w = 0;
    for (char c : text.substr(0, tick)) {
        if (c < '0' || c > '9') throw Error("malformed width in literal: " + std::string(text));
        w = w * 10 + static_cast<std::uint64_t>(c - '0');
        if (w > (1u << 24)) throw Error("literal width too large: " + std::string(text));
    }
    if (w == 0) throw Error("literal width must be >= 1: " + std::string(text));
    char base = static_cast<char>(std::tolower(text[tick + 1]));
    if (base != 'b' && base != 'h' && base != 'd')
        throw Error("unknown literal base: " + std::string(text));
    std::string_view digits = text.substr(tick + 2);
    if (digits.empty()) throw Error("literal has no digits: " + std::string(text));
    return {static_cast<std::uint32_t>(w), base, digits};
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Places a digit's bits at [pos, pos+digit_bits); bits past width must be zero
// for the value to fit.
void place_digit(std::vector<std::uint64_t>& plane, std::uint32_t width, std::uint32_t pos,
                 std::uint32_t digit_bits, std::uint32_t value, std::string_view text) {
    for (std::uint32_t i = 0; i < digit_bits; ++i) {
        if (!((value >> i) & 1)) continue;
        if (pos + i >= width)
            throw Error("literal value does not fit in " + std::to_string(width) +
                        " bits: " + std::string(text));
        words::set_bit(plane.data(), pos + i, true);
    }
}

}  // namespace

Logic Logic::from_text(std::string_view text) {
    auto [width, base, digits] = split_literal(text);
    Logic out(width);
    if (base == 'd') {
        for (char c : digits) {
            if (c == 'x' || c == 'X')
                throw Error("X digit not allowed in decimal literal: " + std::string(text));
            if (c < '0' || c > '9') throw Error("bad decimal digit in " + std::string(text));
        }
        // value = value * 10 + digit over enough words to detect overflow
        std::size_t n = out.v_.size() + 1;
        std::vector<std::uint64_t> acc(n, 0), ten(n, 0), digit(n, 0);
        ten[0] = 10;
        for (char c : digits) {
            std::vector<std::uint64_t> t(n, 0);
            words::mul(acc.data(), n, ten.data(), n, t.data(),
                       static_cast<std::uint32_t>(n * words::kBits));
            digit[0] = static_cast<std::uint64_t>(c - '0');
            words::add(t.data(), n, digit.data(), n, acc.data(),
                       static_cast<std::uint32_t>(n * words::kBits));
        }
        for (std::uint32_t i = width; i < n * words::kBits; ++i)
            if (words::bit(acc.data(), n, i))
                throw Error("literal value does not fit in " + std::to_string(width) +
                            " bits: " + std::string(text));
        acc.resize(out.v_.size());
        out.v_ = std::move(acc);
        return out;
    }
    std::uint32_t digit_bits = base == 'b' ? 1 : 4;
    std::uint32_t pos = 0;
    for (std::size_t i = digits.size(); i-- > 0; pos += digit_bits) {
        char c = digits[i];
        if (c == 'x' || c == 'X') {
            for (std::uint32_t k = 0; k < digit_bits; ++k) {
                if (pos + k >= width)
                    throw Error("literal value does not fit in " + std::to_string(width) +
                                " bits: " + std::string(text));
                words::set_bit(out.x_.data(), pos + k, true);
            }
            continue;
        }
        int d = base == 'b' ? (c == '0' ? 0 : (c == '1' ? 1 : -1)) : hex_digit(c);
        if (d < 0) throw Error("bad digit '" + std::string(1, c) + "' in " + std::string(text));
        place_digit(out.v_, width, pos, digit_bits, static_cast<std::uint32_t>(d), text);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bitwise ops

namespace {

void require_same_width(const Logic& a, const Logic& b, const char* op) {
    if (a.width() != b.width())
        throw Error(std::string(op) + ": width mismatch " + std::to_string(a.width()) + " vs " +
                    std::to_string(b.width()));
}

}  // namespace

Logic logic_not(const Logic& a) {
    Logic out(a.width());
    for (std::size_t i = 0; i < out.v_.size(); ++i) {
        out.x_[i] = a.x_[i];
        out.v_[i] = ~a.v_[i] & ~a.x_[i];
    }
    out.canonicalize();
    return out;
}

Logic logic_and(const Logic& a, const Logic& b) {
    require_same_width(a, b, "and");
    Logic out(a.width());
    for (std::size_t i = 0; i < out.v_.size(); ++i) {
        std::uint64_t zero_a = ~a.v_[i] & ~a.x_[i];
        std::uint64_t zero_b = ~b.v_[i] & ~b.x_[i];
        out.x_[i] = (a.x_[i] | b.x_[i]) & ~(zero_a | zero_b);
        out.v_[i] = a.v_[i] & b.v_[i];
    }
    out.canonicalize();
    return out;
}

Logic logic_or(const Logic& a, const Logic& b) {
    require_same_width(a, b, "or");
    Logic out(a.width());
    for (std::size_t i = 0; i < out.v_.size(); ++i) {
        out.v_[i] = a.v_[i] | b.v_[i];
        out.x_[i] = (a.x_[i] | b.x_[i]) & ~out.v_[i];
    }
    out.canonicalize();
    return out;
}

Logic logic_xor(const Logic& a, const Logic& b) {
    require_same_width(a, b, "xor");
    Logic out(a.width());
    for (std::size_t i = 0; i < out.v_.size(); ++i) {
        out.x_[i] = a.x_[i] | b.x_[i];
        out.v_[i] = (a.v_[i] ^ b.v_[i]) & ~out.x_[i];
    }
    out.canonicalize();
    return out;
}

Logic logic_reduce(const Logic& a, ReduceKind kind) {
    bool any_x = a.has_x();
    Logic out(1);
    switch (kind) {
        case ReduceKind::Or: {
            if (words::any(a.v_data(), a.word_count())) return Logic::from_uint(1, 1);
            return any_x ? Logic::all_x(1) : Logic::zeros(1);
        }
        case ReduceKind::And: {
            bool definite_zero = false;
            for (std::size_t i = 0; i < a.word_count(); ++i) {
                std::uint64_t def0 = ~a.v_word(i) & ~a.x_word(i);
                if (i + 1 == a.word_count()) def0 &= words::tail_mask(a.width());
                if (def0) definite_zero = true;
            }
            if (definite_zero) return Logic::zeros(1);
            return any_x ? Logic::all_x(1) : Logic::from_uint(1, 1);
        }
        case ReduceKind::Xor: {
            if (any_x) return Logic::all_x(1);
            std::uint64_t parity = 0;
            for (std::size_t i = 0; i < a.word_count(); ++i) parity ^= a.v_word(i);
            parity = __builtin_popcountll(parity) & 1;
            return Logic::from_uint(parity, 1);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Arithmetic

Logic logic_add(const Logic& a, const Logic& b) {
    require_same_width(a, b, "add");
    std::uint32_t w = a.width() + 1;
    if (a.has_x() || b.has_x()) return Logic::all_x(w);
    Logic out(w);
    std::vector<std::uint64_t> r(words::count(w), 0);
    words::add(a.v_data(), a.word_count(), b.v_data(), b.word_count(), r.data(), w);
    return Logic::from_planes(w, std::move(r), {});
}

Logic logic_sub(const Logic& a, const Logic& b) {
    require_same_width(a, b, "sub");
    std::uint32_t w = a.width() + 1;
    if (a.has_x() || b.has_x()) return Logic::all_x(w);
    std::vector<std::uint64_t> r(words::count(w), 0);
    words::sub(a.v_data(), a.word_count(), b.v_data(), b.word_count(), r.data(), w);
    return Logic::from_planes(w, std::move(r), {});
}

Logic logic_mul(const Logic& a, const Logic& b) {
    require_same_width(a, b, "mul");
    std::uint32_t w = a.width() * 2;
    if (a.has_x() || b.has_x()) return Logic::all_x(w);
    std::vector<std::uint64_t> r(words::count(w), 0);
    words::mul(a.v_data(), a.word_count(), b.v_data(), b.word_count(), r.data(), w);
    return Logic::from_planes(w, std::move(r), {});
}

std::pair<Logic, Logic> logic_divmod(const Logic& a, const Logic& b) {
    require_same_width(a, b, "divmod");
    std::uint32_t w = a.width();
    if (a.has_x() || b.has_x() || b.is_zero()) return {Logic::all_x(w), Logic::all_x(w)};
    std::vector<std::uint64_t> q(words::count(w), 0), r(words::count(w), 0);
    words::divmod(a.v_data(), b.v_data(), q.data(), r.data(), w);
    return {Logic::from_planes(w, std::move(q), {}), Logic::from_planes(w, std::move(r), {})};
}

// ---------------------------------------------------------------------------
// Comparisons

Logic logic_eq(const Logic& a, const Logic& b) {
    require_same_width(a, b, "eq");
    bool any_x = false;
    for (std::size_t i = 0; i < a.word_count(); ++i) {
        std::uint64_t definite = ~a.x_word(i) & ~b.x_word(i);
        if ((a.v_word(i) ^ b.v_word(i)) & definite) return Logic::zeros(1);
        any_x = any_x || a.x_word(i) || b.x_word(i);
    }
    return any_x ? Logic::all_x(1) : Logic::from_uint(1, 1);
}

namespace {

// Interval endpoints reachable by resolving X bits; unsigned.
std::vector<std::uint64_t> umin_bits(const Logic& a) { return a.v_words(); }

std::vector<std::uint64_t> umax_bits(const Logic& a) {
    std::vector<std::uint64_t> r = a.v_words();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] |= a.x_word(i);
    return r;
}

// For signed intervals, offset the sign bit so unsigned compare applies.
std::vector<std::uint64_t> soffset(std::vector<std::uint64_t> bits, std::uint32_t width) {
    std::uint32_t sign = width - 1;
    bits[sign / 64] ^= std::uint64_t{1} << (sign % 64);
    return bits;
}

std::vector<std::uint64_t> smin_bits(const Logic& a) {
    // sign X -> 1 (most negative), other X -> 0
    std::vector<std::uint64_t> r = a.v_words();
    std::uint32_t sign = a.width() - 1;
    if (a.bit(sign) == 2) r[sign / 64] |= std::uint64_t{1} << (sign % 64);
    return soffset(std::move(r), a.width());
}

std::vector<std::uint64_t> smax_bits(const Logic& a) {
    // sign X -> 0, other X -> 1
    std::vector<std::uint64_t> r = a.v_words();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] |= a.x_word(i);
    std::uint32_t sign = a.width() - 1;
    if (a.bit(sign) == 2) r[sign / 64] &= ~(std::uint64_t{1} << (sign % 64));
    return soffset(std::move(r), a.width());
}

Logic interval_lt(const std::vector<std::uint64_t>& amin, const std::vector<std::uint64_t>& amax,
                  const std::vector<std::uint64_t>& bmin, const std::vector<std::uint64_t>& bmax) {
    if (words::ucmp(amax.data(), amax.size(), bmin.data(), bmin.size()) < 0)
        return Logic::from_uint(1, 1);
    if (words::ucmp(amin.data(), amin.size(), bmax.data(), bmax.size()) >= 0)
        return Logic::zeros(1);
    return Logic::all_x(1);
}

}  // namespace

Logic logic_lt_u(const Logic& a, const Logic& b) {
    require_same_width(a, b, "lt");
    return interval_lt(umin_bits(a), umax_bits(a), umin_bits(b), umax_bits(b));
}

Logic logic_gt_u(const Logic& a, const Logic& b) { return logic_lt_u(b, a); }

Logic logic_lt_s(const Logic& a, const Logic& b) {
    require_same_width(a, b, "lt_s");
    return interval_lt(smin_bits(a), smax_bits(a), smin_bits(b), smax_bits(b));
}

Logic logic_gt_s(const Logic& a, const Logic& b) { return logic_lt_s(b, a); }

// ---------------------------------------------------------------------------
// Selection and concatenation

Logic logic_cat(const std::vector<Logic>& parts) {
    if (parts.empty()) throw Error("cat of zero parts");
    std::uint64_t total = 0;
    for (const Logic& p : parts) total += p.width();
    if (total > (1u << 24)) throw Error("cat result too wide");
    std::uint32_t w = static_cast<std::uint32_t>(total);
    std::vector<std::uint64_t> v(words::count(w), 0), x(words::count(w), 0);
    std::uint32_t pos = 0;
    for (const Logic& p : parts) {
        words::blit(v.data(), pos, p.v_data(), p.word_count(), 0, p.width());
        words::blit(x.data(), pos, p.x_data(), p.word_count(), 0, p.width());
        pos += p.width();
    }
    return Logic::from_planes(w, std::move(v), std::move(x));
}

Logic logic_select(const Logic& a, std::uint32_t low, std::uint32_t count) {
    if (count == 0) throw Error("select of zero bits");
    Logic out(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint64_t pos = std::uint64_t{low} + i;
        out.set_bit(i, pos < a.width() ? a.bit(static_cast<std::uint32_t>(pos)) : 2);
    }
    return out;
}

Logic logic_dyn_select(const Logic& a, const Logic& idx, std::uint32_t count) {
    if (count == 0) throw Error("select of zero bits");
    if (idx.has_x()) return Logic::all_x(count);
    std::uint64_t i = 0;
    for (std::size_t w = 0; w < idx.word_count(); ++w) {
        if (w == 0)
            i = idx.v_word(0);
        else if (idx.v_word(w))
            return Logic::all_x(count);  // astronomically out of range
    }
    if (i > 0xFFFFFFFFull) return Logic::all_x(count);
    return logic_select(a, static_cast<std::uint32_t>(i), count);
}

Logic logic_insert(const Logic& a, std::uint32_t low, const Logic& value) {
    Logic out = a;
    for (std::uint32_t i = 0; i < value.width(); ++i) {
        std::uint64_t pos = std::uint64_t{low} + i;
        if (pos >= a.width()) break;  // out-of-range tail dropped
        out.set_bit(static_cast<std::uint32_t>(pos), value.bit(i));
    }
    return out;
}

Logic logic_dyn_insert(const Logic& a, const Logic& idx, const Logic& value) {
    if (value.width() > a.width()) throw Error("insert value wider than target");
    if (idx.has_x()) return Logic::all_x(a.width());
    std::uint64_t i = idx.v_word(0);
    for (std::size_t w = 1; w < idx.word_count(); ++w)
        if (idx.v_word(w)) return a;
    if (i >= a.width()) return a;
    return logic_insert(a, static_cast<std::uint32_t>(i), value);
}

// ---------------------------------------------------------------------------
// Resizing

Logic logic_zext(const Logic& a, std::uint32_t width) {
    if (width < a.width()) throw Error("zext narrower than source");
    Logic out(width);
    std::vector<std::uint64_t> v(words::count(width), 0), x(words::count(width), 0);
    std::copy(a.v_words().begin(), a.v_words().end(), v.begin());
    std::copy(a.x_words().begin(), a.x_words().end(), x.begin());
    return Logic::from_planes(width, std::move(v), std::move(x));
}

Logic logic_sext(const Logic& a, std::uint32_t width) {
    if (width < a.width()) throw Error("sext narrower than source");
    Logic out = logic_zext(a, width);
    int sign = a.bit(a.width() - 1);
    for (std::uint32_t i = a.width(); i < width; ++i) out.set_bit(i, sign);
    return out;
}

Logic logic_resize(const Logic& a, std::uint32_t width, bool is_signed) {
    if (width == a.width()) return a;
    if (width < a.width()) return logic_select(a, 0, width);
    return is_signed ? logic_sext(a, width) : logic_zext(a, width);
}

Logic logic_merge(const Logic& a, const Logic& b) {
    require_same_width(a, b, "merge");
    Logic out(a.width());
    for (std::size_t i = 0; i < out.v_.size(); ++i) {
        out.x_[i] = a.x_[i] | b.x_[i] | (a.v_[i] ^ b.v_[i]);
        out.v_[i] = a.v_[i] & b.v_[i];
    }
    out.canonicalize();
    return out;
}

// ---------------------------------------------------------------------------
// BitPat

BitPat::BitPat(std::uint32_t width, std::vector<std::uint64_t> care,
               std::vector<std::uint64_t> value)
    : width_(width), care_(std::move(care)), value_(std::move(value)) {
    if (width == 0) throw Error("BitPat width must be >= 1");
    care_.resize(words::count(width), 0);
    value_.resize(words::count(width), 0);
    words::mask_tail(care_.data(), care_.size(), width);
    for (std::size_t i = 0; i < value_.size(); ++i) value_[i] &= care_[i];
}

BitPat BitPat::from_text(std::string_view text) {
    auto [width, base, digits] = split_literal(text);
    if (base == 'd') throw Error("BitPat does not support decimal literals");
    std::uint32_t digit_bits = base == 'b' ? 1 : 4;
    std::vector<std::uint64_t> care(words::count(width), 0), value(words::count(width), 0);
    std::uint32_t pos = 0;
    for (std::size_t i = digits.size(); i-- > 0; pos += digit_bits) {
        char c = digits[i];
        if (c == '?') continue;  // don't care: leave care bits clear
        int d = base == 'b' ? (c == '0' ? 0 : (c == '1' ? 1 : -1)) : hex_digit(c);
        if (d < 0) throw Error("bad digit '" + std::string(1, c) + "' in " + std::string(text));
        for (std::uint32_t k = 0; k < digit_bits; ++k) {
            if (pos + k >= width) {
                if ((d >> k) & 1)
                    throw Error("pattern does not fit in " + std::to_string(width) +
                                " bits: " + std::string(text));
                continue;
            }
            words::set_bit(care.data(), pos + k, true);
            if ((d >> k) & 1) words::set_bit(value.data(), pos + k, true);
        }
    }
    return BitPat(width, std::move(care), std::move(value));
}

Logic BitPat::match(const Logic& a) const {
    if (a.width() != width_)
        throw Error("BitPat match: width mismatch " + std::to_string(width_) + " vs " +
                    std::to_string(a.width()));
    bool x_at_care = false;
    for (std::size_t i = 0; i < care_.size(); ++i) {
        std::uint64_t definite = care_[i] & ~a.x_word(i);
        if ((a.v_word(i) ^ value_[i]) & definite) return Logic::zeros(1);
        if (care_[i] & a.x_word(i)) x_at_care = true;
    }
    return x_at_care ? Logic::all_x(1) : Logic::from_uint(1, 1);
}

std::string BitPat::str() const {
    std::string s = std::to_string(width_) + "'b";
    for (std::uint32_t i = width_; i-- > 0;) {
        if (!words::bit(care_.data(), care_.size(), i))
            s += '?';
        else
            s += words::bit(value_.data(), value_.size(), i) ? '1' : '0';
    }
    return s;
}

}  // namespace hgl
