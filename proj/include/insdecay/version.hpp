#pragma once

namespace insdecay {

inline constexpr const char* kVersion = "0.3.1";

}  // namespace insdecay
