#include "catforge/item.hpp"

#include <sstream>

namespace catforge {

Model model_from_string(std::string_view name) {
    if (name == "1PL") return Model::OnePL;
    if (name == "2PL") return Model::TwoPL;
    if (name == "3PL") return Model::ThreePL;
    if (name == "4PL") return Model::FourPL;
    throw DomainError("unknown model '" + std::string(name) +
                      "' (expected one of 1PL, 2PL, 3PL, 4PL)");
}

std::string_view to_string(Model model) {
    switch (model) {
        case Model::OnePL: return "1PL";
        case Model::TwoPL: return "2PL";
        case Model::ThreePL: return "3PL";
        case Model::FourPL: return "4PL";
    }
    throw DomainError("invalid Model enum value");
}

std::size_t parameter_count(Model model) {
    switch (model) {
        case Model::OnePL: return 1;
        case Model::TwoPL: return 2;
        case Model::ThreePL: return 3;
        case Model::FourPL: return 4;
    }
    throw DomainError("invalid Model enum value");
}

void Item::check() const {
    if (valid()) return;
    std::ostringstream msg;
    msg << "invalid item parameters (a=" << a << ", b=" << b << ", c=" << c
        << ", d=" << d << ", r=" << r
        << "): require a > 0, b finite, 0 <= c < d <= 1, 0 <= r <= 1";
    throw DomainError(msg.str());
}

}  // namespace catforge
