#include "slf/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include <zlib.h>

#include <nlohmann/json.hpp>

namespace slf {

static_assert(std::endian::native == std::endian::little,
              "file I/O assumes a little-endian host");

namespace {

// NIfTI-1 single-file header, 348 bytes. Fields we do not interpret are kept
// so a read header can be replayed verbatim on write.
#pragma pack(push, 1)
struct Nifti1Header {
    std::int32_t sizeof_hdr;
    char data_type[10];
    char db_name[18];
    std::int32_t extents;
    std::int16_t session_error;
    char regular;
    char dim_info;
    std::int16_t dim[8];
    float intent_p1, intent_p2, intent_p3;
    std::int16_t intent_code;
    std::int16_t datatype;
    std::int16_t bitpix;
    std::int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    std::int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max, cal_min;
    float slice_duration;
    float toffset;
    std::int32_t glmax, glmin;
    char descrip[80];
    char aux_file[24];
    std::int16_t qform_code, sform_code;
    float quatern_b, quatern_c, quatern_d;
    float qoffset_x, qoffset_y, qoffset_z;
    float srow_x[4], srow_y[4], srow_z[4];
    char intent_name[16];
    char magic[4];
};
#pragma pack(pop)
static_assert(sizeof(Nifti1Header) == 348);

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtInt32 = 8;
constexpr std::int16_t kDtFloat32 = 16;

constexpr std::size_t kDatatypeOffset = 70;
constexpr std::size_t kDimOffset = 40;
constexpr std::size_t kPixdimOffset = 76;
constexpr std::size_t kMagicOffset = 344;

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Whole-file read through zlib; handles both gzip-compressed and plain files.
std::vector<std::byte> read_all(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::byte> buf;
    std::byte chunk[1 << 16];
    int n;
    while ((n = gzread(f, chunk, sizeof(chunk))) > 0) {
        buf.insert(buf.end(), chunk, chunk + n);
    }
    const bool bad = n < 0;
    gzclose(f);
    if (bad) throw IoError("read failure on '" + path + "'");
    return buf;
}

void write_all(const std::string& path, const void* header, std::size_t header_len,
               const void* payload, std::size_t payload_len, bool gzip) {
    if (gzip) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        bool ok = true;
        if (header_len) ok = gzwrite(f, header, static_cast<unsigned>(header_len)) == static_cast<int>(header_len);
        if (ok && payload_len) ok = gzwrite(f, payload, static_cast<unsigned>(payload_len)) == static_cast<int>(payload_len);
        ok = gzclose(f) == Z_OK && ok;
        if (!ok) throw IoError("write failure on '" + path + "'");
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(static_cast<const char*>(header), static_cast<std::streamsize>(header_len));
    f.write(static_cast<const char*>(payload), static_cast<std::streamsize>(payload_len));
    f.flush();
    if (!f) throw IoError("write failure on '" + path + "'");
}

template <typename T>
void swap_inplace(T& v) {
    auto* p = reinterpret_cast<std::byte*>(&v);
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(p[i], p[sizeof(T) - 1 - i]);
}

void swap_header(Nifti1Header& h) {
    swap_inplace(h.sizeof_hdr);
    swap_inplace(h.extents);
    swap_inplace(h.session_error);
    for (auto& d : h.dim) swap_inplace(d);
    swap_inplace(h.intent_p1);
    swap_inplace(h.intent_p2);
    swap_inplace(h.intent_p3);
    swap_inplace(h.intent_code);
    swap_inplace(h.datatype);
    swap_inplace(h.bitpix);
    swap_inplace(h.slice_start);
    for (auto& p : h.pixdim) swap_inplace(p);
    swap_inplace(h.vox_offset);
    swap_inplace(h.scl_slope);
    swap_inplace(h.scl_inter);
    swap_inplace(h.slice_end);
    swap_inplace(h.cal_max);
    swap_inplace(h.cal_min);
    swap_inplace(h.slice_duration);
    swap_inplace(h.toffset);
    swap_inplace(h.glmax);
    swap_inplace(h.glmin);
    swap_inplace(h.qform_code);
    swap_inplace(h.sform_code);
    swap_inplace(h.quatern_b);
    swap_inplace(h.quatern_c);
    swap_inplace(h.quatern_d);
    swap_inplace(h.qoffset_x);
    swap_inplace(h.qoffset_y);
    swap_inplace(h.qoffset_z);
    for (auto& v : h.srow_x) swap_inplace(v);
    for (auto& v : h.srow_y) swap_inplace(v);
    for (auto& v : h.srow_z) swap_inplace(v);
}

Volume read_nifti(const std::string& path) {
    const std::vector<std::byte> buf = read_all(path);
    if (buf.size() < sizeof(Nifti1Header)) {
        throw FormatError("nifti: file shorter than the 348-byte header", buf.size());
    }
    Nifti1Header h;
    std::memcpy(&h, buf.data(), sizeof(h));

    bool swapped = false;
    if (h.sizeof_hdr != 348) {
        auto other = h.sizeof_hdr;
        swap_inplace(other);
        if (other != 348) throw FormatError("nifti: sizeof_hdr is not 348", 0);
        swapped = true;
        swap_header(h);
    }
    if (std::memcmp(h.magic, "n+1", 4) != 0) {
        throw FormatError("nifti: magic is not 'n+1' (two-file .hdr/.img pairs unsupported)",
                          kMagicOffset);
    }
    if (h.dim[0] < 1 || h.dim[0] > 7) {
        throw FormatError("nifti: dim[0] out of range 1..7", kDimOffset);
    }
    Dims dims{1, 1, 1};
    for (int i = 1; i <= h.dim[0] && i <= 3; ++i) {
        if (h.dim[i] <= 0) throw FormatError("nifti: non-positive spatial dim", kDimOffset + 2 * i);
        (i == 1 ? dims.nx : i == 2 ? dims.ny : dims.nz) = h.dim[i];
    }
    for (int i = 4; i <= h.dim[0]; ++i) {
        if (h.dim[i] > 1) {
            throw FormatError("nifti: only 3D volumes supported (dim[" + std::to_string(i) + "] > 1)",
                              kDimOffset + 2 * i);
        }
    }
    Spacing spacing;
    for (int i = 1; i <= 3; ++i) {
        const float p = i <= h.dim[0] ? h.pixdim[i] : 1.0f;
        if (!(p > 0.0f)) throw FormatError("nifti: non-positive pixdim", kPixdimOffset + 4 * i);
        (i == 1 ? spacing.sx : i == 2 ? spacing.sy : spacing.sz) = p;
    }

    DType dtype;
    std::size_t elem = 0;
    switch (h.datatype) {
        case kDtUint8: dtype = DType::u8; elem = 1; break;
        case kDtInt16: dtype = DType::i32; elem = 2; break;  // widened below
        case kDtInt32: dtype = DType::i32; elem = 4; break;
        case kDtFloat32: dtype = DType::f32; elem = 4; break;
        default:
            throw FormatError("nifti: unsupported datatype code " + std::to_string(h.datatype),
                              kDatatypeOffset);
    }
    if (h.bitpix != static_cast<std::int16_t>(elem * 8)) {
        throw FormatError("nifti: bitpix inconsistent with datatype", kDatatypeOffset + 2);
    }

    const auto offset = static_cast<std::size_t>(h.vox_offset);
    if (h.vox_offset < 348.0f || static_cast<float>(offset) != h.vox_offset) {
        throw FormatError("nifti: bad vox_offset", 108);
    }
    const std::size_t need = static_cast<std::size_t>(dims.voxels()) * elem;
    if (buf.size() < offset + need) {
        throw FormatError("nifti: truncated payload, expected " + std::to_string(need) +
                              " bytes from vox_offset",
                          buf.size());
    }

    Volume v(dims, spacing, dtype);
    const std::byte* src = buf.data() + offset;
    if (h.datatype == kDtInt16) {
        auto dst = v.as<std::int32_t>();
        for (std::int64_t i = 0; i < dims.voxels(); ++i) {
            std::int16_t x;
            std::memcpy(&x, src + 2 * i, 2);
            if (swapped) swap_inplace(x);
            dst[i] = x;
        }
    } else {
        std::memcpy(v.raw().data(), src, need);
        if (swapped && elem == 4) {
            auto* p = reinterpret_cast<std::uint32_t*>(v.raw().data());
            for (std::int64_t i = 0; i < dims.voxels(); ++i) swap_inplace(p[i]);
        }
    }

    // Keep the (native-endian) header so orientation fields survive a rewrite.
    std::vector<std::byte> header(sizeof(h));
    std::memcpy(header.data(), &h, sizeof(h));
    v.set_io_header(std::move(header));
    return v;
}

void write_nifti(const Volume& v, const std::string& path) {
    Nifti1Header h;
    if (v.io_header().size() == sizeof(h)) {
        std::memcpy(&h, v.io_header().data(), sizeof(h));
    } else {
        std::memset(&h, 0, sizeof(h));
        h.scl_slope = 1.0f;
    }
    h.sizeof_hdr = 348;
    for (auto& d : h.dim) d = 1;
    h.dim[0] = 3;
    h.dim[1] = static_cast<std::int16_t>(v.dims().nx);
    h.dim[2] = static_cast<std::int16_t>(v.dims().ny);
    h.dim[3] = static_cast<std::int16_t>(v.dims().nz);
    h.pixdim[1] = static_cast<float>(v.spacing().sx);
    h.pixdim[2] = static_cast<float>(v.spacing().sy);
    h.pixdim[3] = static_cast<float>(v.spacing().sz);
    switch (v.dtype()) {
        case DType::u8: h.datatype = kDtUint8; h.bitpix = 8; break;
        case DType::i32: h.datatype = kDtInt32; h.bitpix = 32; break;
        case DType::f32: h.datatype = kDtFloat32; h.bitpix = 32; break;
    }
    h.vox_offset = 352.0f;
    std::memcpy(h.magic, "n+1", 4);

    if (v.dims().nx > 32767 || v.dims().ny > 32767 || v.dims().nz > 32767) {
        throw InvalidArgument("nifti: dims exceed int16 header range");
    }

    // Header + 4 zero bytes (no extensions) + payload.
    std::vector<std::byte> head(352, std::byte{0});
    std::memcpy(head.data(), &h, sizeof(h));
    write_all(path, head.data(), head.size(), v.raw().data(), v.raw().size(),
              ends_with(path, ".gz"));
}

Volume read_mvol(const std::string& path) {
    const std::vector<std::byte> buf = read_all(path);
    const auto* chars = reinterpret_cast<const char*>(buf.data());
    const void* nl = std::memchr(chars, '\n', buf.size());
    if (!nl) throw FormatError("mvol: missing newline-terminated JSON header", buf.size());
    const std::size_t header_len = static_cast<const char*>(nl) - chars;

    nlohmann::json j = nlohmann::json::parse(chars, chars + header_len, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw FormatError("mvol: header is not valid JSON", 0);
    }
    if (!j.contains("dims") || !j.contains("spacing") || !j.contains("dtype")) {
        throw FormatError("mvol: header missing dims/spacing/dtype", 0);
    }
    const auto jd = j["dims"];
    const auto js = j["spacing"];
    if (!jd.is_array() || jd.size() != 3 || !js.is_array() || js.size() != 3) {
        throw FormatError("mvol: dims/spacing must be 3-element arrays", 0);
    }
    const auto dt = dtype_from_name(j["dtype"].get<std::string>());
    if (!dt) throw FormatError("mvol: unknown dtype '" + j["dtype"].get<std::string>() + "'", 0);

    Dims dims{jd[0].get<std::int64_t>(), jd[1].get<std::int64_t>(), jd[2].get<std::int64_t>()};
    Spacing spacing{js[0].get<double>(), js[1].get<double>(), js[2].get<double>()};
    if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) {
        throw FormatError("mvol: non-positive dims", 0);
    }
    if (!(spacing.sx > 0) || !(spacing.sy > 0) || !(spacing.sz > 0)) {
        throw FormatError("mvol: non-positive spacing", 0);
    }

    Volume v(dims, spacing, *dt);
    const std::size_t payload_at = header_len + 1;
    const std::size_t need = v.raw().size();
    if (buf.size() - payload_at != need) {
        throw FormatError("mvol: payload is " + std::to_string(buf.size() - payload_at) +
                              " bytes, header implies " + std::to_string(need),
                          buf.size());
    }
    std::memcpy(v.raw().data(), buf.data() + payload_at, need);
    return v;
}

void write_mvol(const Volume& v, const std::string& path) {
    nlohmann::json j{
        {"dims", {v.dims().nx, v.dims().ny, v.dims().nz}},
        {"spacing", {v.spacing().sx, v.spacing().sy, v.spacing().sz}},
        {"dtype", dtype_name(v.dtype())},
    };
    const std::string header = j.dump() + "\n";
    write_all(path, header.data(), header.size(), v.raw().data(), v.raw().size(), false);
}

}  // namespace

FileFormat detect_format(const std::string& path) {
    if (ends_with(path, ".mvol")) return FileFormat::mvol;
    if (ends_with(path, ".nii") || ends_with(path, ".nii.gz")) return FileFormat::nifti;
    return FileFormat::auto_detect;
}

Volume read_volume(const std::string& path, FileFormat format) {
    if (format == FileFormat::auto_detect) format = detect_format(path);
    if (format == FileFormat::auto_detect) {
        // Sniff: gzip or a 348 little-endian prefix means NIfTI, '{' means MVOL.
        std::ifstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path + "' for reading");
        unsigned char head[4] = {0, 0, 0, 0};
        f.read(reinterpret_cast<char*>(head), 4);
        if (head[0] == '{') {
            format = FileFormat::mvol;
        } else if ((head[0] == 0x1f && head[1] == 0x8b) ||
                   (head[0] == 92 && head[1] == 1 && head[2] == 0 && head[3] == 0)) {
            format = FileFormat::nifti;
        } else {
            throw FormatError("unrecognized volume file format", 0);
        }
    }
    return format == FileFormat::mvol ? read_mvol(path) : read_nifti(path);
}

void write_volume(const Volume& v, const std::string& path, FileFormat format) {
    if (format == FileFormat::auto_detect) format = detect_format(path);
    if (format == FileFormat::auto_detect) {
        throw InvalidArgument("cannot infer output format from '" + path +
                              "' (use .mvol, .nii or .nii.gz)");
    }
    if (format == FileFormat::mvol) {
        write_mvol(v, path);
    } else {
        write_nifti(v, path);
    }
}

BinaryMask read_mask(const std::string& path, double threshold, FileFormat format) {
    return binarize(read_volume(path, format), threshold);
}

}  // namespace slf
