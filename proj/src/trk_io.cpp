#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "tracklet/streamline_io.hpp"

namespace tracklet {

namespace {

#pragma pack(push, 1)
struct TrkHeader {
    char id_string[6];             // "TRACK\0"
    std::int16_t dim[3];
    float voxel_size[3];
    float origin[3];
    std::int16_t n_scalars;
    char scalar_name[10][20];
    std::int16_t n_properties;
    char property_name[10][20];
    float vox_to_ras[4][4];
    char reserved[444];
    char voxel_order[4];
    char pad2[4];
    float image_orientation_patient[6];
    char pad1[2];
    unsigned char invert_x, invert_y, invert_z;
    unsigned char swap_xy, swap_yz, swap_zx;
    std::int32_t n_count;
    std::int32_t version;
    std::int32_t hdr_size;
};
#pragma pack(pop)

static_assert(sizeof(TrkHeader) == 1000, "TRK header must be exactly 1000 bytes");

bool affine_is_zero(const float m[4][4]) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (m[i][j] != 0.0f) return false;
    return true;
}

}  // namespace

Tractogram read_trk(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::IoError, "read_trk: cannot open " + path);

    TrkHeader hdr{};
    if (!in.read(reinterpret_cast<char*>(&hdr), sizeof(hdr)))
        fail(Err::TruncatedFile, "read_trk: header shorter than 1000 bytes in " + path);
    if (std::memcmp(hdr.id_string, "TRACK", 5) != 0)
        fail(Err::BadMagic, "read_trk: not a TRK file: " + path);
    if (hdr.version != 2)
        fail(Err::UnsupportedVersion,
             "read_trk: unsupported TRK version " + std::to_string(hdr.version) + " in " + path);
    if (hdr.hdr_size != 1000)
        fail(Err::UnsupportedVersion, "read_trk: hdr_size != 1000 in " + path);
    if (hdr.n_scalars < 0 || hdr.n_scalars > 10 || hdr.n_properties < 0 || hdr.n_properties > 10)
        fail(Err::ParseError, "read_trk: implausible scalar/property counts in " + path);
    if (hdr.voxel_order[0] != '\0' && std::memcmp(hdr.voxel_order, "RAS", 3) != 0)
        fail(Err::UnsupportedVersion,
             "read_trk: voxel_order is not RAS (strict mode rejects reordering) in " + path);
    if (hdr.n_count < 0) fail(Err::ParseError, "read_trk: negative streamline count in " + path);

    const Vec3 vs{hdr.voxel_size[0], hdr.voxel_size[1], hdr.voxel_size[2]};
    if (!(vs.x > 0.0f) || !(vs.y > 0.0f) || !(vs.z > 0.0f))
        fail(Err::ParseError, "read_trk: non-positive voxel_size in " + path);

    // Points are stored in voxmm. Convert to RAS world mm via the header
    // affine applied at voxel centers: world = M * (p / voxel_size - 0.5).
    // An all-zero affine (legacy writers) means voxmm already is world mm.
    const bool identity_affine = affine_is_zero(hdr.vox_to_ras);
    double m[3][4];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = static_cast<double>(hdr.vox_to_ras[i][j]);

    Tractogram t;
    t.voxel_size = vs;
    t.streamlines.reserve(static_cast<std::size_t>(hdr.n_count));

    std::vector<float> buf;
    for (std::int32_t si = 0; si < hdr.n_count; ++si) {
        std::int32_t npts = 0;
        if (!in.read(reinterpret_cast<char*>(&npts), sizeof(npts)))
            fail(Err::TruncatedFile, "read_trk: stream count short in " + path);
        if (npts < 0) fail(Err::ParseError, "read_trk: negative point count in " + path);

        const std::size_t floats_per_point = 3 + static_cast<std::size_t>(hdr.n_scalars);
        buf.resize(static_cast<std::size_t>(npts) * floats_per_point +
                   static_cast<std::size_t>(hdr.n_properties));
        if (!buf.empty() &&
            !in.read(reinterpret_cast<char*>(buf.data()),
                     static_cast<std::streamsize>(buf.size() * sizeof(float))))
            fail(Err::TruncatedFile, "read_trk: point data short in " + path);

        Streamline s(static_cast<std::size_t>(npts));
        for (std::int32_t pi = 0; pi < npts; ++pi) {
            const float* p = &buf[static_cast<std::size_t>(pi) * floats_per_point];
            if (identity_affine) {
                s[static_cast<std::size_t>(pi)] = {p[0], p[1], p[2]};
            } else {
                const double v[3] = {static_cast<double>(p[0]) / vs.x - 0.5,
                                     static_cast<double>(p[1]) / vs.y - 0.5,
                                     static_cast<double>(p[2]) / vs.z - 0.5};
                s[static_cast<std::size_t>(pi)] = {
                    m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2] + m[0][3],
                    m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2] + m[1][3],
                    m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2] + m[2][3]};
            }
        }
        validate_streamline(s, "read_trk: " + path + " streamline " + std::to_string(si));
        t.streamlines.push_back(std::move(s));
    }

    t.recompute_bounds();
    return t;
}

void write_trk(const Tractogram& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::IoError, "write_trk: cannot open " + path);

    const Vec3 vs = t.voxel_size;

    TrkHeader hdr{};
    std::memcpy(hdr.id_string, "TRACK", 6);
    const Vec3 ext = t.bounds.extent();
    for (int i = 0; i < 3; ++i) {
        const double e = ext[i] / vs[i];
        hdr.dim[i] = static_cast<std::int16_t>(std::min(32767.0, std::ceil(e) + 1.0));
        hdr.voxel_size[i] = static_cast<float>(vs[i]);
        hdr.origin[i] = 0.0f;
    }
    hdr.n_scalars = 0;
    hdr.n_properties = 0;
    // Inverse of the reader's convention with points stored as world mm:
    // M = diag(voxel_size) with translation +0.5*voxel_size, so that
    // M * (p / voxel_size - 0.5) == p.
    hdr.vox_to_ras[0][0] = static_cast<float>(vs.x);
    hdr.vox_to_ras[1][1] = static_cast<float>(vs.y);
    hdr.vox_to_ras[2][2] = static_cast<float>(vs.z);
    hdr.vox_to_ras[0][3] = static_cast<float>(0.5 * vs.x);
    hdr.vox_to_ras[1][3] = static_cast<float>(0.5 * vs.y);
    hdr.vox_to_ras[2][3] = static_cast<float>(0.5 * vs.z);
    hdr.vox_to_ras[3][3] = 1.0f;
    std::memcpy(hdr.voxel_order, "RAS", 4);
    hdr.n_count = static_cast<std::int32_t>(t.streamlines.size());
    hdr.version = 2;
    hdr.hdr_size = 1000;

    out.write(reinterpret_cast<const char*>(&hdr), sizeof(hdr));

    std::vector<float> buf;
    for (const auto& s : t.streamlines) {
        const std::int32_t npts = static_cast<std::int32_t>(s.size());
        out.write(reinterpret_cast<const char*>(&npts), sizeof(npts));
        buf.resize(static_cast<std::size_t>(npts) * 3);
        for (std::size_t i = 0; i < s.size(); ++i) {
            buf[i * 3 + 0] = static_cast<float>(s[i].x);
            buf[i * 3 + 1] = static_cast<float>(s[i].y);
            buf[i * 3 + 2] = static_cast<float>(s[i].z);
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) fail(Err::IoError, "write_trk: write failed for " + path);
}

}  // namespace tracklet
