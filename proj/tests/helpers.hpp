#pragma once
// Shared fixtures for the unit tests: file loading from the networks/
// directory and a couple of frequently used parsed systems.
#include <srn/chain.hpp>

#include <fstream>
#include <sstream>
#include <string>

#ifndef SRN_NETWORK_DIR
#define SRN_NETWORK_DIR "networks"
#endif

namespace srntest {

inline std::string network_text(const std::string& name) {
    std::ifstream in(std::string(SRN_NETWORK_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline srn::TranslatedSystem translated(const std::string& name) {
    auto ts = srn::load_network(network_text(name));
    return srn::translate(ts, srn::default_pic(ts));
}

inline srn::TranslatedSystem translated_text(const std::string& text) {
    auto ts = srn::load_network(text);
    return srn::translate(ts, srn::default_pic(ts));
}

}  // namespace srntest
