#include "rasp/sequence.hpp"

#include "rasp/error.hpp"

namespace rasp {

std::vector<std::string> split_code_points(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if (lead >= 0xF0) len = 4;
        else if (lead >= 0xE0) len = 3;
        else if (lead >= 0xC0) len = 2;
        if (i + len > text.size()) len = 1;
        for (std::size_t j = 1; j < len; ++j) {
            if ((static_cast<unsigned char>(text[i + j]) & 0xC0) != 0x80) {
                len = 1;
                break;
            }
        }
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

Sequence Sequence::from_string(std::string_view text) {
    std::vector<Atom> items;
    for (auto& cp : split_code_points(text)) items.push_back(Atom::token(std::move(cp)));
    return Sequence(std::move(items));
}

std::optional<std::vector<double>> Sequence::numeric_view() const {
    std::vector<double> out;
    out.reserve(items_.size());
    for (const auto& a : items_) {
        if (a.is_number()) out.push_back(a.as_number());
        else if (a.is_bool()) out.push_back(a.as_bool() ? 1.0 : 0.0);
        else return std::nullopt;
    }
    return out;
}

Sequence broadcast_const(const Atom& a, std::size_t n) {
    if (n == 0) throw EvalError("cannot broadcast to an empty sequence");
    return Sequence(std::vector<Atom>(n, a));
}

std::string to_display(const Sequence& s) {
    bool as_string = !s.empty();
    for (const auto& a : s) {
        if (!a.is_token() || split_code_points(a.as_token()).size() != 1) {
            as_string = false;
            break;
        }
    }
    std::string out;
    if (as_string) {
        for (const auto& a : s) out += a.as_token();
        return out;
    }
    out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += to_display(s[i]);
    }
    out += "]";
    return out;
}

SelectionMatrix SelectionMatrix::from_rows(const std::vector<std::vector<bool>>& rows) {
    SelectionMatrix m(rows.size());
    for (std::size_t q = 0; q < rows.size(); ++q) {
        if (rows[q].size() != rows.size()) throw EvalError("selection matrix must be square");
        for (std::size_t k = 0; k < rows.size(); ++k) m.set(q, k, rows[q][k]);
    }
    return m;
}

}  // namespace rasp
