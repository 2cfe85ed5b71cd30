#include "slf/volume.hpp"

#include <cstring>

namespace slf {

std::size_t dtype_size(DType t) {
    switch (t) {
        case DType::u8: return 1;
        case DType::i32: return 4;
        case DType::f32: return 4;
    }
    return 0;
}

const char* dtype_name(DType t) {
    switch (t) {
        case DType::u8: return "uint8";
        case DType::i32: return "int32";
        case DType::f32: return "float32";
    }
    return "?";
}

std::optional<DType> dtype_from_name(std::string_view name) {
    if (name == "uint8") return DType::u8;
    if (name == "int32") return DType::i32;
    if (name == "float32") return DType::f32;
    return std::nullopt;
}

std::string to_string(const Dims& d) {
    return "(" + std::to_string(d.nx) + ", " + std::to_string(d.ny) + ", " +
           std::to_string(d.nz) + ")";
}

Volume::Volume(Dims dims, Spacing spacing, DType dtype)
    : dims_(dims), spacing_(spacing), dtype_(dtype) {
    if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) {
        throw InvalidArgument("volume dims must be positive, got " + to_string(dims));
    }
    if (!(spacing.sx > 0.0) || !(spacing.sy > 0.0) || !(spacing.sz > 0.0)) {
        throw InvalidArgument("volume spacing must be strictly positive");
    }
    data_.resize(static_cast<std::size_t>(dims.voxels()) * dtype_size(dtype));
}

void Volume::check_dtype(DType expected) const {
    if (expected != dtype_) {
        throw InvalidArgument(std::string("typed view of ") + dtype_name(expected) +
                              " does not match volume dtype " + dtype_name(dtype_));
    }
}

double Volume::scalar_at(std::int64_t i) const {
    switch (dtype_) {
        case DType::u8: return static_cast<double>(as<std::uint8_t>()[i]);
        case DType::i32: return static_cast<double>(as<std::int32_t>()[i]);
        case DType::f32: return static_cast<double>(as<float>()[i]);
    }
    return 0.0;
}

bool Volume::operator==(const Volume& other) const {
    return dims_ == other.dims_ && spacing_ == other.spacing_ && dtype_ == other.dtype_ &&
           data_.size() == other.data_.size() &&
           std::memcmp(data_.data(), other.data_.data(), data_.size()) == 0;
}

Volume new_volume(Dims dims, Spacing spacing, DType dtype, double fill) {
    Volume v(dims, spacing, dtype);
    switch (dtype) {
        case DType::u8: {
            auto s = v.as<std::uint8_t>();
            std::fill(s.begin(), s.end(), static_cast<std::uint8_t>(fill));
            break;
        }
        case DType::i32: {
            auto s = v.as<std::int32_t>();
            std::fill(s.begin(), s.end(), static_cast<std::int32_t>(fill));
            break;
        }
        case DType::f32: {
            auto s = v.as<float>();
            std::fill(s.begin(), s.end(), static_cast<float>(fill));
            break;
        }
    }
    return v;
}

std::int64_t BinaryMask::foreground_count() const {
    std::int64_t n = 0;
    for (std::uint8_t v : vol.as<std::uint8_t>()) n += v;
    return n;
}

BinaryMask make_mask(Volume v) {
    if (v.dtype() != DType::u8) {
        throw InvalidArgument(std::string("mask must have dtype uint8, got ") +
                              dtype_name(v.dtype()));
    }
    for (std::uint8_t x : v.as<std::uint8_t>()) {
        if (x > 1) throw InvalidArgument("mask voxels must be 0 or 1, found " + std::to_string(x));
    }
    return BinaryMask{std::move(v)};
}

BinaryMask binarize(const Volume& v, double threshold) {
    Volume out(v.dims(), v.spacing(), DType::u8);
    auto dst = out.as<std::uint8_t>();
    const std::int64_t n = v.num_voxels();
    switch (v.dtype()) {
        case DType::u8: {
            auto src = v.as<std::uint8_t>();
            for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] != 0;
            break;
        }
        case DType::i32: {
            auto src = v.as<std::int32_t>();
            for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] != 0;
            break;
        }
        case DType::f32: {
            auto src = v.as<float>();
            for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] > threshold;
            break;
        }
    }
    return BinaryMask{std::move(out)};
}

}  // namespace slf
