#ifndef LOWTWIST_VERSION_HPP
#define LOWTWIST_VERSION_HPP

namespace lowtwist {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
