#ifndef CASCADELAB_VERSION_HPP
#define CASCADELAB_VERSION_HPP

namespace cascadelab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cascadelab

#endif  // CASCADELAB_VERSION_HPP
