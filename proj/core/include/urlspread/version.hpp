#ifndef URLSPREAD_VERSION_HPP
#define URLSPREAD_VERSION_HPP

namespace urlspread {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace urlspread

#endif
