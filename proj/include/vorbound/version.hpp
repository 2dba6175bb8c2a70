#ifndef VORBOUND_VERSION_HPP
#define VORBOUND_VERSION_HPP

namespace vorbound {

inline constexpr const char* kVersion = "vorbound 1.0.0";

}  // namespace vorbound

#endif
