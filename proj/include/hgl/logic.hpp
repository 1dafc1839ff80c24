#pragma once

// Three-state (0/1/X) values of arbitrary bit width. A value is stored as two
// bit planes: the value plane `v` and the unknown plane `x`. A set x-bit marks
// the position as X; canonical form keeps the corresponding v-bit zero, so
// plane equality is value equality.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hgl {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raw word-span helpers. The simulator's binary fast path works on these
// directly, without going through Logic.
namespace words {

using Word = std::uint64_t;
inline constexpr std::uint32_t kBits = 64;

inline std::size_t count(std::uint32_t width) { return (width + kBits - 1) / kBits; }

inline Word tail_mask(std::uint32_t width) {
    std::uint32_t r = width % kBits;
    return r ? ((Word{1} << r) - 1) : ~Word{0};
}

inline void mask_tail(Word* w, std::size_t n, std::uint32_t width) {
    if (n) w[n - 1] &= tail_mask(width);
}

inline bool any(const Word* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (w[i]) return true;
    return false;
}

inline Word get(const Word* w, std::size_t n, std::size_t i) { return i < n ? w[i] : 0; }

inline bool bit(const Word* w, std::size_t n, std::uint32_t i) {
    std::size_t wi = i / kBits;
    return wi < n && ((w[wi] >> (i % kBits)) & 1);
}

inline void set_bit(Word* w, std::uint32_t i, bool b) {
    Word m = Word{1} << (i % kBits);
    if (b)
        w[i / kBits] |= m;
    else
        w[i / kBits] &= ~m;
}

// Copies `count` bits from src starting at src_off into dst starting at
// dst_off. Source bits past src_width read as zero. Ranges may not overlap.
void blit(Word* dst, std::uint32_t dst_off, const Word* src, std::size_t src_words,
          std::uint32_t src_off, std::uint32_t count);

// out = a + b over `out_width` bits; inputs zero-extended.
void add(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out,
         std::uint32_t out_width);
// out = a - b over `out_width` bits (two's complement wraparound).
void sub(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out,
         std::uint32_t out_width);
// out = a * b over `out_width` bits.
void mul(const Word* a, std::size_t na, const Word* b, std::size_t nb, Word* out,
         std::uint32_t out_width);
// Unsigned long division over `width`-bit operands. b must be non-zero.
void divmod(const Word* a, const Word* b, Word* q, Word* r, std::uint32_t width);
// -1 / 0 / +1 comparison of zero-extended operands.
int ucmp(const Word* a, std::size_t na, const Word* b, std::size_t nb);

}  // namespace words

class Logic {
public:
    Logic() : Logic(1) {}
    explicit Logic(std::uint32_t width) : width_(check_width(width)), v_(words::count(width), 0),
                                          x_(words::count(width), 0) {}

    static Logic zeros(std::uint32_t width) { return Logic(width); }
    static Logic ones(std::uint32_t width);
    static Logic all_x(std::uint32_t width);
    static Logic from_uint(std::uint64_t value, std::uint32_t width);
    // Parses "<width>'<base><digits>" with base b/h/d; x/X digits allowed for
    // b and h. Throws on malformed text or a value that does not fit.
    static Logic from_text(std::string_view text);
    static Logic from_planes(std::uint32_t width, std::vector<std::uint64_t> v,
                             std::vector<std::uint64_t> x);

    std::uint32_t width() const { return width_; }
    std::size_t word_count() const { return v_.size(); }
    std::uint64_t v_word(std::size_t i) const { return v_[i]; }
    std::uint64_t x_word(std::size_t i) const { return x_[i]; }
    const std::uint64_t* v_data() const { return v_.data(); }
    const std::uint64_t* x_data() const { return x_.data(); }
    const std::vector<std::uint64_t>& v_words() const { return v_; }
    const std::vector<std::uint64_t>& x_words() const { return x_; }

    bool has_x() const { return words::any(x_.data(), x_.size()); }
    bool is_all_x() const;
    bool is_zero() const { return !words::any(v_.data(), v_.size()) && !has_x(); }

    // Per-bit access: 0, 1, or 2 for X.
    int bit(std::uint32_t i) const;
    void set_bit(std::uint32_t i, int value);

    std::uint64_t to_uint() const;  // requires !has_x() and width <= 64
    std::string str() const;        // "4'b1x00"

    bool operator==(const Logic& o) const {
        return width_ == o.width_ && v_ == o.v_ && x_ == o.x_;
    }
    bool operator!=(const Logic& o) const { return !(*this == o); }

private:
    static std::uint32_t check_width(std::uint32_t w) {
        if (w == 0) throw Error("Logic width must be >= 1");
        return w;
    }
    void canonicalize();

    friend Logic logic_not(const Logic&);
    friend Logic logic_and(const Logic&, const Logic&);
    friend Logic logic_or(const Logic&, const Logic&);
    friend Logic logic_xor(const Logic&, const Logic&);
    friend Logic logic_merge(const Logic&, const Logic&);
    friend class BitPat;

    std::uint32_t width_;
    std::vector<std::uint64_t> v_;
    std::vector<std::uint64_t> x_;
};

enum class ReduceKind { And, Or, Xor };

// Bitwise family. X follows the three-state truth tables: 0 dominates AND,
// 1 dominates OR, any X poisons XOR.
Logic logic_not(const Logic& a);
Logic logic_and(const Logic& a, const Logic& b);
Logic logic_or(const Logic& a, const Logic& b);
Logic logic_xor(const Logic& a, const Logic& b);
Logic logic_reduce(const Logic& a, ReduceKind kind);

// Arithmetic. add/sub widen by one bit, mul doubles, divmod keeps the operand
// width. Any X operand bit makes every result bit X; so does a zero divisor.
Logic logic_add(const Logic& a, const Logic& b);
Logic logic_sub(const Logic& a, const Logic& b);
Logic logic_mul(const Logic& a, const Logic& b);
std::pair<Logic, Logic> logic_divmod(const Logic& a, const Logic& b);

// Comparisons return a 1-bit result. When the outcome is decidable despite X
// bits (known bits already differ, or the value intervals are disjoint) the
// definite answer is returned; otherwise X.
Logic logic_eq(const Logic& a, const Logic& b);
Logic logic_lt_u(const Logic& a, const Logic& b);
Logic logic_gt_u(const Logic& a, const Logic& b);
Logic logic_lt_s(const Logic& a, const Logic& b);
Logic logic_gt_s(const Logic& a, const Logic& b);

// Concatenation; the first part lands at the least-significant end.
Logic logic_cat(const std::vector<Logic>& parts);
// Static part select of [low, low+count); positions past a.width() read X.
Logic logic_select(const Logic& a, std::uint32_t low, std::uint32_t count);
// Dynamic part select; an X index makes the whole result X.
Logic logic_dyn_select(const Logic& a, const Logic& idx, std::uint32_t count);
// Returns a with bits [low, low+count) replaced by value; bits that would land
// past a.width() are dropped.
Logic logic_insert(const Logic& a, std::uint32_t low, const Logic& value);
Logic logic_dyn_insert(const Logic& a, const Logic& idx, const Logic& value);

Logic logic_zext(const Logic& a, std::uint32_t width);
Logic logic_sext(const Logic& a, std::uint32_t width);
// Truncate or extend to `width`; extension is sign- or zero-filling.
Logic logic_resize(const Logic& a, std::uint32_t width, bool is_signed);

// Pessimistic union of two alternatives: bits where both agree keep their
// value, all other bits become X.
Logic logic_merge(const Logic& a, const Logic& b);

// Match pattern of 0/1/don't-care, used only in comparisons.
class BitPat {
public:
    // Parses "<width>'<base><digits>" with '?' as don't care (b or h base).
    static BitPat from_text(std::string_view text);
    BitPat(std::uint32_t width, std::vector<std::uint64_t> care, std::vector<std::uint64_t> value);

    std::uint32_t width() const { return width_; }
    bool care_bit(std::uint32_t i) const { return words::bit(care_.data(), care_.size(), i); }
    const std::vector<std::uint64_t>& care_words() const { return care_; }
    const std::vector<std::uint64_t>& value_words() const { return value_; }

    // 1 if every care position matches definitely, 0 on a definite mismatch,
    // X otherwise.
    Logic match(const Logic& a) const;
    std::string str() const;

private:
    std::uint32_t width_;
    std::vector<std::uint64_t> care_;
    std::vector<std::uint64_t> value_;
};

}  // namespace hgl
