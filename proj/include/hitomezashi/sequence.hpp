#pragma once

// Bi-infinite {0,1} sequences given by a finite window plus an extension rule.

#include <hitomezashi/errors.hpp>

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hitomezashi {

using Bit = std::uint8_t;

/// Floor modulo: result in [0, m) for any sign of `value`.
constexpr std::int64_t floor_mod(std::int64_t value, std::int64_t m) noexcept {
    const std::int64_t r = value % m;
    return r < 0 ? r + m : r;
}

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Pure 64-bit arithmetic,
/// so every platform produces the same bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Seeded bit at `index`:
///   low bit of mix64(mix64(seed) + kGolden * uint64(index))
/// with uint64 wrap-around and two's-complement conversion of negative indices.
constexpr Bit seeded_bit(std::uint64_t seed, std::int64_t index) noexcept {
    return static_cast<Bit>(mix64(mix64(seed) + kGolden * static_cast<std::uint64_t>(index)) & 1U);
}

/// Independent child seed number `stream` of `seed`; used to hand each
/// campaign trial its own pair of sequences.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(seed + kGolden * (stream + 1));
}

struct ConstantExtension {
    Bit value = 0;
    friend bool operator==(const ConstantExtension&, const ConstantExtension&) = default;
};

struct PeriodicExtension {
    friend bool operator==(const PeriodicExtension&, const PeriodicExtension&) = default;
};

struct SeededExtension {
    std::uint64_t seed = 0;
    friend bool operator==(const SeededExtension&, const SeededExtension&) = default;
};

using Extension = std::variant<ConstantExtension, PeriodicExtension, SeededExtension>;

class SequenceSpec {
public:
    SequenceSpec(std::vector<Bit> window, std::int64_t window_offset, Extension extension)
        : window_(std::move(window)), offset_(window_offset), extension_(extension) {
        for (Bit b : window_) {
            if (b > 1) {
                throw ContractViolation("sequence window bits must be 0 or 1");
            }
        }
        if (std::holds_alternative<PeriodicExtension>(extension_) && window_.empty()) {
            throw ContractViolation("periodic sequence needs a non-empty window");
        }
        if (const auto* c = std::get_if<ConstantExtension>(&extension_); c && c->value > 1) {
            throw ContractViolation("constant extension value must be 0 or 1");
        }
        if (const auto* s = std::get_if<SeededExtension>(&extension_)) {
            mixed_seed_ = mix64(s->seed);
        }
    }

    static SequenceSpec constant(Bit value) { return {{}, 0, ConstantExtension{value}}; }
    static SequenceSpec periodic(std::vector<Bit> window, std::int64_t offset = 0) {
        return {std::move(window), offset, PeriodicExtension{}};
    }
    static SequenceSpec seeded(std::uint64_t seed) { return {{}, 0, SeededExtension{seed}}; }

    const std::vector<Bit>& window() const noexcept { return window_; }
    std::int64_t window_offset() const noexcept { return offset_; }
    const Extension& extension() const noexcept { return extension_; }

    Bit bit_at(std::int64_t index) const noexcept {
        const auto len = static_cast<std::int64_t>(window_.size());
        const std::int64_t rel = index - offset_;
        if (rel >= 0 && rel < len) {
            return window_[static_cast<std::size_t>(rel)];
        }
        switch (extension_.index()) {
        case 0:
            return std::get<ConstantExtension>(extension_).value;
        case 1:
            return window_[static_cast<std::size_t>(floor_mod(rel, len))];
        default:
            return static_cast<Bit>(mix64(mixed_seed_ + kGolden * static_cast<std::uint64_t>(index)) & 1U);
        }
    }

    /// Smallest p with bit_at(i) == bit_at(i + p) for every i, when the whole
    /// sequence is periodic (periodic extension, or constant with nothing in
    /// the window that differs from the constant).
    std::optional<std::int64_t> period() const noexcept {
        if (std::holds_alternative<PeriodicExtension>(extension_)) {
            return minimal_period();
        }
        if (const auto* c = std::get_if<ConstantExtension>(&extension_)) {
            for (Bit b : window_) {
                if (b != c->value) {
                    return std::nullopt;
                }
            }
            return 1;
        }
        return std::nullopt;
    }

    friend bool operator==(const SequenceSpec& a, const SequenceSpec& b) {
        return a.window_ == b.window_ && a.offset_ == b.offset_ && a.extension_ == b.extension_;
    }

private:
    std::int64_t minimal_period() const noexcept {
        const std::size_t n = window_.size();
        for (std::size_t p = 1; p < n; ++p) {
            if (n % p != 0) {
                continue;
            }
            bool ok = true;
            for (std::size_t k = p; k < n && ok; ++k) {
                ok = window_[k] == window_[k - p];
            }
            if (ok) {
                return static_cast<std::int64_t>(p);
            }
        }
        return static_cast<std::int64_t>(n);
    }

    std::vector<Bit> window_;
    std::int64_t offset_ = 0;
    Extension extension_;
    std::uint64_t mixed_seed_ = 0;
};

inline Bit bit_at(const SequenceSpec& spec, std::int64_t index) noexcept { return spec.bit_at(index); }

// Grammar:
//   <bits>@<offset>:const0 | <bits>@<offset>:const1 | <bits>@<offset>:periodic
//   <bits>@<offset>:seed<N>           (window over a seeded background)
//   rand:<N>                          (seeded, empty window)
// <bits> may be empty except for periodic; <offset> is a signed decimal.

inline std::string format_spec(const SequenceSpec& spec) {
    if (const auto* s = std::get_if<SeededExtension>(&spec.extension()); s && spec.window().empty() && spec.window_offset() == 0) {
        return "rand:" + std::to_string(s->seed);
    }
    std::string out;
    for (Bit b : spec.window()) {
        out.push_back(b ? '1' : '0');
    }
    out += '@';
    out += std::to_string(spec.window_offset());
    out += ':';
    std::visit(
        [&out](const auto& ext) {
            using T = std::decay_t<decltype(ext)>;
            if constexpr (std::is_same_v<T, ConstantExtension>) {
                out += ext.value ? "const1" : "const0";
            } else if constexpr (std::is_same_v<T, PeriodicExtension>) {
                out += "periodic";
            } else {
                out += "seed" + std::to_string(ext.seed);
            }
        },
        spec.extension());
    return out;
}

namespace detail {

template <typename Int>
Int parse_decimal(std::string_view token, std::string_view what) {
    Int value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("bad " + std::string(what) + " '" + std::string(token) + "'");
    }
    return value;
}

} // namespace detail

inline SequenceSpec parse_spec(std::string_view text) {
    constexpr std::string_view rand_prefix = "rand:";
    if (text.substr(0, rand_prefix.size()) == rand_prefix) {
        const auto seed = detail::parse_decimal<std::uint64_t>(text.substr(rand_prefix.size()), "seed");
        return SequenceSpec::seeded(seed);
    }

    const auto at = text.find('@');
    if (at == std::string_view::npos) {
        throw ParseError("missing '@' in sequence spec '" + std::string(text) + "'");
    }
    const auto colon = text.find(':', at);
    if (colon == std::string_view::npos) {
        throw ParseError("missing ':' in sequence spec '" + std::string(text) + "'");
    }

    std::vector<Bit> window;
    for (char c : text.substr(0, at)) {
        if (c != '0' && c != '1') {
            throw ParseError("bad bits '" + std::string(text.substr(0, at)) + "'");
        }
        window.push_back(static_cast<Bit>(c - '0'));
    }
    const auto offset = detail::parse_decimal<std::int64_t>(text.substr(at + 1, colon - at - 1), "offset");

    const std::string_view ext = text.substr(colon + 1);
    if (ext == "const0" || ext == "const1") {
        return {std::move(window), offset, ConstantExtension{static_cast<Bit>(ext.back() - '0')}};
    }
    if (ext == "periodic") {
        if (window.empty()) {
            throw ParseError("bad bits '' (periodic needs at least one bit)");
        }
        return {std::move(window), offset, PeriodicExtension{}};
    }
    if (ext.substr(0, 4) == "seed") {
        const auto seed = detail::parse_decimal<std::uint64_t>(ext.substr(4), "seed");
        return {std::move(window), offset, SeededExtension{seed}};
    }
    throw ParseError("bad extension '" + std::string(ext) + "'");
}

} // namespace hitomezashi
