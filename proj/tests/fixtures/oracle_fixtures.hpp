#pragma once

// Generated by tests/oracles/freeze_fixtures.py. Do not edit.

namespace fixtures {

inline constexpr double kMaternRadii[] = {0.05, 0.3, 1.0, 2.5, 7.0};
inline constexpr double kMatern_k3_d3[] = {0.99879089572575, 0.9630636868862334, 0.7357588823428849, 0.2872974951836459, 0.007295055724436131};
inline constexpr double kMatern_k4_d3[] = {0.9995835869128339, 0.985288233506685, 0.8583853627333656, 0.45830790898343504, 0.022189127828493232};
inline constexpr double kMatern_k3_d2[] = {0.9993765088309654, 0.9785583127616909, 0.8124194493175887, 0.37956314462051205, 0.013586773083990459};
inline constexpr double kMatern_k2_d2[] = {0.9954837162941254, 0.9167976100371974, 0.6019072301972346, 0.1847270408693677, 0.003179277408194279};
inline constexpr double kMatern_k2_d3[] = {0.9512294245007142, 0.7408182206817181, 0.36787944117144245, 0.08208499862389883, 0.0009118819655545166};
inline constexpr double kMatern_k3_d3_ell0p1[] = {0.9987908957257501, 0.9630636868862334, 0.7357588823428849, 0.2872974951836459, 0.007295055724436131};
inline constexpr double kSupPower21_ppa2to5[] = {0.6200664919378064, 0.2821079705259497, 0.16437349063439474, 0.10909675600027223};
inline constexpr double kSupPower20_ppa3 = 0.2806755698003045;
inline constexpr double kSupPower20_ppa5 = 0.10977509157303013;
inline constexpr double kProjectionMaxResidual = 0.10089787224561367;
inline constexpr double kProjectionRmsResidual = 0.06382333346304551;
inline constexpr double kProjectionProbePoint[] = {0.3, -0.7, 0.55};
inline constexpr double kProjectionProbeValue[] = {1.0239822276562291, 0.7941811355127987, 0.19229987568848095};
inline constexpr double kLyapA[] = {-0.7017207341343319, -0.5177334709845255, 0.1495958369624623, -1.7898968436779759, 0.2844522535691842, -0.8122272200607307, -0.726050324449302, 0.09853727513129668, -1.9514738484064804, -0.15841288562715672, -1.2218164789574852, 0.40969535789355127, 0.44244173776631784, -0.9278626907702291, -0.9331679527718499, -1.9605687775660021};
inline constexpr double kLyapQ[] = {5.509741771709775, -0.3232876269428898, 0.5266997822407837, -0.509032566762541, -0.3232876269428898, 5.457350865479737, 0.18650780084652627, 0.36606882414521974, 0.5266997822407837, 0.18650780084652627, 4.8722272954729515, 1.1034026475026244, -0.509032566762541, 0.36606882414521974, 1.1034026475026244, 6.662472027940652};
inline constexpr double kLyapP[] = {4.8216890171531395, 1.2830216016546803, -0.8071711255728554, -2.964285115380121, 1.2830216016546798, 4.424814980030408, -0.6681993235115116, -1.5343774419388758, -0.807171125572855, -0.6681993235115118, 2.2811209709002664, 0.014358991310802122, -2.964285115380121, -1.534377441938876, 0.014358991310802365, 4.331238017686641};

}  // namespace fixtures
