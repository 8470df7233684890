#ifndef MNH_VERSION_HPP
#define MNH_VERSION_HPP

namespace mnh {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
