#pragma once

namespace bfseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitDegenerate = 3;

int run(int argc, char** argv);

}  // namespace bfseg::cli
