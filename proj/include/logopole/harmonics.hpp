#pragma once

#include "logopole/coords.hpp"
#include "logopole/eval.hpp"

// Solid spherical harmonics in the frames O, O' and O'', and prolate
// spheroidal solid harmonics in the centred and offset systems.
namespace logopole {

enum class FocalSystem { Centred, Offset };

// S_n^m = r^{-n-1} P_n^m(u) e^{im phi}; zero for 0 <= n < m.
EvalResult ssh_exterior(int n, int m, const FieldPoint& p, Frame frame = Frame::O);

// r^n P_n^m(u) e^{im phi}.
EvalResult ssh_regular(int n, int m, const FieldPoint& p, Frame frame = Frame::O);

// Second kind: r^n Q_n^m(u) e^{im phi} for n >= -m. Throws AxisSingularity
// on the z-axis of the frame.
EvalResult ssh_second_kind(int n, int m, const FieldPoint& p, Frame frame = Frame::O);

// Q_n^m(xi) P_n^m(eta) e^{im phi}, n >= m >= 0. Throws
// FocalSegmentSingularity on the focal segment (xi = 1).
EvalResult pssh(int n, int m, const FieldPoint& p, FocalSystem focal = FocalSystem::Centred);

// Q_n^m(xi) P_n^{-m}(eta) e^{im phi} (centred system) from second-kind
// harmonics about O' and O''. The two groups are summed separately and
// subtracted last; est_error reflects that cancellation.
EvalResult pssh_from_offset_q(int n, int m, const FieldPoint& p);

// P_n^m(xi) P_n^{-m}(eta) e^{im phi} (centred system) as a finite sum of
// regular harmonics about O''.
EvalResult pp_from_offset_regular(int n, int m, const FieldPoint& p);

} // namespace logopole
