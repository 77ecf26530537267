#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/fft.hpp"
#include "motionforge/rng.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

/// Six-degree-of-freedom rigid pose: rotations in degrees, translations in
/// millimeters. All zeros is the identity.
struct RigidPose {
    std::array<double, 3> rot{0.0, 0.0, 0.0};
    std::array<double, 3> trans{0.0, 0.0, 0.0};

    bool operator==(const RigidPose&) const = default;

    bool is_identity() const {
        return rot == std::array<double, 3>{0.0, 0.0, 0.0} && trans == std::array<double, 3>{0.0, 0.0, 0.0};
    }

    RigidPose operator+(const RigidPose& o) const {
        RigidPose r;
        for (int i = 0; i < 3; ++i) {
            r.rot[i] = rot[i] + o.rot[i];
            r.trans[i] = trans[i] + o.trans[i];
        }
        return r;
    }
};

/// Additive pose change at one phase-encode line.
struct MotionEvent {
    int line = 0;
    RigidPose delta;
};

/// One pose per phase-encode line plus the ramp width the curve was built with.
struct MotionCurve {
    std::vector<RigidPose> poses;
    int ramp_width = 1;

    int n_lines() const { return static_cast<int>(poses.size()); }
};

/// Ordinal motion severity label: 0 none, 1 mild, 2 severe.
enum class MotionClass : int { none = 0, mild = 1, severe = 2 };

inline MotionClass motion_class_from_int(int v) {
    if (v < 0 || v > 2) {
        throw ArgumentError("motion class must be 0, 1 or 2");
    }
    return static_cast<MotionClass>(v);
}

/// Event placement and per-class magnitude ranges. Event lines are indices
/// on a 256-line axis, rescaled to the actual number of phase-encode lines.
struct EventConfig {
    std::vector<int> lines_base256{93, 118, 163, 238};
    std::array<double, 2> mild_range{0.0, 1.0};   // magnitudes in (lo, hi]
    std::array<double, 2> severe_range{3.0, 4.0};
};

/// Draw the per-class motion events. Class 0 yields no events; classes 1
/// and 2 place one event per configured line with each rotation/translation
/// component drawn uniformly from (lo, hi] in magnitude with a random sign.
inline std::vector<MotionEvent> sample_events(MotionClass cls, int n_lines, std::uint64_t seed,
                                              const EventConfig& cfg = {}) {
    if (n_lines < 4) {
        throw ArgumentError("sample_events: n_lines must be >= 4");
    }
    std::vector<MotionEvent> events;
    if (cls == MotionClass::none) {
        return events;
    }
    const auto& range = (cls == MotionClass::mild) ? cfg.mild_range : cfg.severe_range;

    Rng rng(seed);
    events.reserve(cfg.lines_base256.size());
    for (int base : cfg.lines_base256) {
        MotionEvent e;
        const long scaled = std::lround(static_cast<double>(base) * n_lines / 256.0);
        e.line = static_cast<int>(std::clamp<long>(scaled, 0, n_lines - 1));
        for (int c = 0; c < 6; ++c) {
            const double mag = range[0] + uniform01_open_low(rng) * (range[1] - range[0]);
            const double v = uniform_sign(rng) * mag;
            if (c < 3) {
                e.delta.rot[c] = v;
            } else {
                e.delta.trans[c - 3] = v;
            }
        }
        events.push_back(e);
    }
    return events;
}

/// Build the gradual motion curve: each event's delta blends in linearly
/// over `ramp_width` lines around its event line, and deltas accumulate
/// across events. With w = ramp_width, the weight of event e at line k is
/// 0 for k <= e.line - ceil(w/2), 1 for k >= e.line + floor(w/2), and
/// linear in between.
inline MotionCurve build_curve(const std::vector<MotionEvent>& events, int n_lines, int ramp_width) {
    if (n_lines < 1) {
        throw ArgumentError("build_curve: n_lines must be >= 1");
    }
    if (ramp_width < 1) {
        throw ArgumentError("build_curve: ramp_width must be >= 1");
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].line < 0 || events[i].line >= n_lines) {
            throw ArgumentError("build_curve: event line out of range");
        }
        if (i > 0) {
            if (events[i].line <= events[i - 1].line) {
                throw ArgumentError("build_curve: event lines must be strictly increasing");
            }
            if (events[i].line - events[i - 1].line <= ramp_width) {
                throw ArgumentError("build_curve: event ramps overlap (spacing must exceed ramp_width)");
            }
        }
    }

    MotionCurve curve;
    curve.ramp_width = ramp_width;
    curve.poses.resize(static_cast<std::size_t>(n_lines));
    const int lo_off = (ramp_width + 1) / 2; // ceil(w/2)
    const int hi_off = ramp_width / 2;       // floor(w/2)
    for (int k = 0; k < n_lines; ++k) {
        RigidPose pose;
        for (const MotionEvent& e : events) {
            double w;
            if (k <= e.line - lo_off) {
                w = 0.0;
            } else if (k >= e.line + hi_off) {
                w = 1.0;
            } else {
                w = static_cast<double>(k - (e.line - lo_off)) / static_cast<double>(ramp_width);
            }
            for (int c = 0; c < 3; ++c) {
                pose.rot[c] += w * e.delta.rot[c];
                pose.trans[c] += w * e.delta.trans[c];
            }
        }
        curve.poses[static_cast<std::size_t>(k)] = pose;
    }
    return curve;
}

namespace detail {

struct Mat3 {
    std::array<double, 9> m{}; // row-major

    std::array<double, 3> mul(const std::array<double, 3>& v) const {
        return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2], m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
                m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
    }
    Mat3 mul(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) {
                    s += m[3 * i + k] * o.m[3 * k + j];
                }
                r.m[3 * i + j] = s;
            }
        }
        return r;
    }
    Mat3 transpose() const {
        return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }
};

inline Mat3 rotation_matrix(const std::array<double, 3>& rot_deg) {
    const double rx = rot_deg[0] * M_PI / 180.0;
    const double ry = rot_deg[1] * M_PI / 180.0;
    const double rz = rot_deg[2] * M_PI / 180.0;
    const Mat3 Rx{{1, 0, 0, 0, std::cos(rx), -std::sin(rx), 0, std::sin(rx), std::cos(rx)}};
    const Mat3 Ry{{std::cos(ry), 0, std::sin(ry), 0, 1, 0, -std::sin(ry), 0, std::cos(ry)}};
    const Mat3 Rz{{std::cos(rz), -std::sin(rz), 0, std::sin(rz), std::cos(rz), 0, 0, 0, 1}};
    return Rz.mul(Ry).mul(Rx);
}

} // namespace detail

/// Resample the volume under rigid motion: output(p) = input(T^-1(p)) with
/// T = translate(trans / spacing) o Rz o Ry o Rx about the volume center,
/// trilinear interpolation and zero fill outside the grid.
inline Volume3D apply_rigid(const Volume3D& vol, const RigidPose& pose) {
    if (pose.is_identity()) {
        return vol;
    }
    const detail::Mat3 rinv = detail::rotation_matrix(pose.rot).transpose();
    const std::array<double, 3> center{(vol.nx - 1) / 2.0, (vol.ny - 1) / 2.0, (vol.nz - 1) / 2.0};
    const std::array<double, 3> t_vox{pose.trans[0] / vol.spacing[0], pose.trans[1] / vol.spacing[1],
                                      pose.trans[2] / vol.spacing[2]};

    Volume3D out(vol.nx, vol.ny, vol.nz, vol.spacing);
    // source coordinate advances by rinv's first column per +x step
    const std::array<double, 3> dx{rinv.m[0], rinv.m[3], rinv.m[6]};
    for (int z = 0; z < vol.nz; ++z) {
        for (int y = 0; y < vol.ny; ++y) {
            std::array<double, 3> q{0.0 - center[0] - t_vox[0], y - center[1] - t_vox[1],
                                    z - center[2] - t_vox[2]};
            std::array<double, 3> src = rinv.mul(q);
            src[0] += center[0];
            src[1] += center[1];
            src[2] += center[2];
            for (int x = 0; x < vol.nx; ++x) {
                const double sx = src[0], sy = src[1], sz = src[2];
                const int x0 = static_cast<int>(std::floor(sx));
                const int y0 = static_cast<int>(std::floor(sy));
                const int z0 = static_cast<int>(std::floor(sz));
                if (x0 >= -1 && x0 < vol.nx && y0 >= -1 && y0 < vol.ny && z0 >= -1 && z0 < vol.nz) {
                    const double fx = sx - x0, fy = sy - y0, fz = sz - z0;
                    double acc = 0.0;
                    for (int dz = 0; dz < 2; ++dz) {
                        const int zz = z0 + dz;
                        if (zz < 0 || zz >= vol.nz) {
                            continue;
                        }
                        const double wz = dz ? fz : 1.0 - fz;
                        for (int dy = 0; dy < 2; ++dy) {
                            const int yy = y0 + dy;
                            if (yy < 0 || yy >= vol.ny) {
                                continue;
                            }
                            const double wy = dy ? fy : 1.0 - fy;
                            for (int dxi = 0; dxi < 2; ++dxi) {
                                const int xx = x0 + dxi;
                                if (xx < 0 || xx >= vol.nx) {
                                    continue;
                                }
                                const double wx = dxi ? fx : 1.0 - fx;
                                acc += wz * wy * wx * vol.at(xx, yy, zz);
                            }
                        }
                    }
                    out.at(x, y, z) = static_cast<float>(acc);
                }
                src[0] += dx[0];
                src[1] += dx[1];
                src[2] += dx[2];
            }
        }
    }
    return out;
}

/// Optional bookkeeping returned by synthesize_motion.
struct SynthStats {
    int distinct_poses = 0;
    int forward_ffts = 0;
};

/// Forward-model rigid-motion corruption: transform the volume once per
/// distinct pose on the curve, take each pose's k-space plane along the
/// phase-encode axis, and invert the spliced spectrum. Output is the
/// magnitude image clamped to [0,1].
inline Volume3D synthesize_motion(const Volume3D& vol, const MotionCurve& curve, int pe_axis,
                                  SynthStats* stats = nullptr) {
    if (pe_axis < 0 || pe_axis > 2) {
        throw ArgumentError("synthesize_motion: pe_axis must be 0, 1 or 2");
    }
    const int n_lines = vol.dim(pe_axis);
    if (curve.n_lines() != n_lines) {
        throw ArgumentError("synthesize_motion: curve length does not match the phase-encode axis");
    }

    // group phase-encode lines by identical pose, first occurrence order
    std::vector<RigidPose> poses;
    std::vector<std::vector<int>> lines_of;
    for (int k = 0; k < n_lines; ++k) {
        const RigidPose& p = curve.poses[static_cast<std::size_t>(k)];
        std::size_t g = 0;
        for (; g < poses.size(); ++g) {
            if (poses[g] == p) {
                break;
            }
        }
        if (g == poses.size()) {
            poses.push_back(p);
            lines_of.emplace_back();
        }
        lines_of[g].push_back(k);
    }

    ComplexVolume k_out(vol.nx, vol.ny, vol.nz);
    int n_ffts = 0;
    for (std::size_t g = 0; g < poses.size(); ++g) {
        const ComplexVolume k_pose = poses[g].is_identity() ? fftn(vol) : fftn(apply_rigid(vol, poses[g]));
        ++n_ffts;
        for (int line : lines_of[g]) {
            // copy the full plane at index `line` along pe_axis
            const int oa = (pe_axis == 0) ? 1 : 0;
            const int ob = (pe_axis == 2) ? 1 : 2;
            int coord[3];
            coord[pe_axis] = line;
            for (int ib = 0; ib < vol.dim(ob); ++ib) {
                coord[ob] = ib;
                for (int ia = 0; ia < vol.dim(oa); ++ia) {
                    coord[oa] = ia;
                    const std::size_t idx = k_out.index(coord[0], coord[1], coord[2]);
                    k_out.data[idx] = k_pose.data[idx];
                }
            }
        }
    }

    const ComplexVolume img = ifftn(k_out);
    Volume3D out(vol.nx, vol.ny, vol.nz, vol.spacing);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = std::clamp(static_cast<float>(std::abs(img.data[i])), 0.0f, 1.0f);
    }
    if (stats != nullptr) {
        stats->distinct_poses = static_cast<int>(poses.size());
        stats->forward_ffts = n_ffts;
    }
    return out;
}

/// Deterministically shuffle the subjects and deal classes so counts differ
/// by at most one, remainders going to the lower class values.
inline std::map<std::string, MotionClass> assign_balanced_classes(const std::vector<std::string>& subject_ids,
                                                                  std::uint64_t seed) {
    if (subject_ids.empty()) {
        throw ArgumentError("assign_balanced_classes: empty subject list");
    }
    std::vector<std::string> order = subject_ids;
    Rng rng(seed);
    shuffle(order, rng);

    const std::size_t n = order.size();
    const std::size_t base = n / 3;
    const std::size_t rem = n % 3;
    std::map<std::string, MotionClass> assignment;
    std::size_t pos = 0;
    for (int cls = 0; cls < 3; ++cls) {
        const std::size_t count = base + (static_cast<std::size_t>(cls) < rem ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            assignment[order[pos++]] = static_cast<MotionClass>(cls);
        }
    }
    return assignment;
}

} // namespace motionforge
