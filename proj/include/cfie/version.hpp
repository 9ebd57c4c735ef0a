#ifndef CFIE_VERSION_HPP
#define CFIE_VERSION_HPP

namespace cfie {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace cfie

#endif
