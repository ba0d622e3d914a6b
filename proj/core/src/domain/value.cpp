#include "cha/domain/value.hpp"

#include <sstream>

namespace cha {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::size_t value_byte_size(const Value& value) {
    return std::visit(
        overloaded{
            [](const std::string& s) { return s.size(); },
            [](EmotionLabel e) { return to_string(e).size(); },
            [](const AudioRef& a) { return a.clip ? a.clip->samples.size() * 2 : a.digest.size(); },
            [](const SearchHits& hits) {
                std::size_t n = 0;
                for (const auto& h : hits) n += h.title.size() + h.url.size() + h.snippet.size();
                return n;
            },
            [](double) { return sizeof(double); },
        },
        value);
}

std::string describe_value(const Value& value) {
    return std::visit(
        overloaded{
            [](const std::string& s) {
                if (s.size() <= 80) return s;
                return s.substr(0, 77) + "...";
            },
            [](EmotionLabel e) { return std::string(to_string(e)); },
            [](const AudioRef& a) { return "<audio " + a.digest.substr(0, 12) + ">"; },
            [](const SearchHits& hits) {
                return "<" + std::to_string(hits.size()) + " search hits>";
            },
            [](double d) {
                std::ostringstream os;
                os << d;
                return os.str();
            },
        },
        value);
}

}  // namespace cha
