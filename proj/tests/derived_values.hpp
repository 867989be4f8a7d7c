#pragma once

// Frozen from tools/oracles/derive_values.py (mpmath, 40 digits). Regenerate there, never by hand.

namespace derived {

inline constexpr double kBeta045 = 0.81818181818181818182;
inline constexpr double kGeocentricAngleDefault = 0.47141987837092632251;
inline constexpr double kCoverageTimeDefault = 903.78647459262577273;
inline constexpr double kCoverageTime550km10deg = 475.78881278044371661;
inline constexpr double kUplinkTwoUserFirst = 31508163.880158146183;
inline constexpr double kUplinkTwoUserSecond = 11651359.711615468639;
inline constexpr double kUplinkTwoUserMean = 21579761.795886807411;
inline constexpr double kUplinkSingleUser = 153021033.82357857229;
inline constexpr double kAmbiguityBound = 0.023809523809523809524;
inline constexpr double kLengthThreshold09 = 12.0;
inline constexpr double kAccuracyLlama200 = 131.67008750417144157;
inline constexpr double kUnitAccuracyLlama200 = 0.0013159480887753689648;
inline constexpr double kComputeExample = 4.012345679012345679;
inline constexpr double kTransmissionExample = 12.0096;
inline constexpr double kLatentGapLhs = 0.0073343428969017312651;
inline constexpr double kLatentGapRhs = 0.11881291317232360316;
inline constexpr double kLatentTaskAmbiguity = 0.24776119402985074627;
inline constexpr double kAccuracyHalfBeta = 1.0771507185901550108;
inline constexpr double kAmbiguityBoundTwoExamples = 0.071428571428571428571;
inline constexpr double kRhoAction9 = 7.9432823472428150207;
inline constexpr double kContractPriceExample = 2.0;
inline constexpr double kAotProportional10 = 83.3245952;
inline constexpr double kAotSubtractive10 = 200.0;

}  // namespace derived
