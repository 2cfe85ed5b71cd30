#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "slf/error.hpp"

namespace slf {

enum class DType : std::uint8_t { u8, i32, f32 };

std::size_t dtype_size(DType t);
const char* dtype_name(DType t);
std::optional<DType> dtype_from_name(std::string_view name);

struct Dims {
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    std::int64_t nz = 0;

    std::int64_t voxels() const { return nx * ny * nz; }
    std::int64_t operator[](int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
    bool operator==(const Dims&) const = default;
};

struct Spacing {
    double sx = 1.0;
    double sy = 1.0;
    double sz = 1.0;

    double voxel_mm3() const { return sx * sy * sz; }
    double operator[](int axis) const { return axis == 0 ? sx : axis == 1 ? sy : sz; }
    bool operator==(const Spacing&) const = default;
};

std::string to_string(const Dims& d);

// A 3D scalar grid in canonical linear layout: x fastest, then y, then z.
// Voxel (x, y, z) lives at linear index x + nx*(y + ny*z). Data is stored as
// raw bytes and viewed through as<T>() with T matching the dtype.
//
// Volumes are immutable by convention once filled in; all library operations
// return new volumes rather than mutating inputs.
class Volume {
public:
    Volume() = default;

    // Zero-filled volume. Throws InvalidArgument on non-positive dims/spacing.
    Volume(Dims dims, Spacing spacing, DType dtype);

    const Dims& dims() const { return dims_; }
    const Spacing& spacing() const { return spacing_; }
    DType dtype() const { return dtype_; }
    std::int64_t num_voxels() const { return dims_.voxels(); }

    std::int64_t index(std::int64_t x, std::int64_t y, std::int64_t z) const {
        return x + dims_.nx * (y + dims_.ny * z);
    }

    template <typename T>
    std::span<const T> as() const {
        check_dtype(dtype_of<T>());
        return {reinterpret_cast<const T*>(data_.data()), static_cast<std::size_t>(num_voxels())};
    }

    template <typename T>
    std::span<T> as() {
        check_dtype(dtype_of<T>());
        return {reinterpret_cast<T*>(data_.data()), static_cast<std::size_t>(num_voxels())};
    }

    std::span<const std::byte> raw() const { return data_; }
    std::span<std::byte> raw() { return data_; }

    // Value of voxel i converted to double, whatever the dtype.
    double scalar_at(std::int64_t i) const;

    // Dims, spacing, dtype and payload bytes; the I/O header sidecar is ignored.
    bool operator==(const Volume& other) const;

    // Raw NIfTI-1 header captured on read; reused verbatim (orientation and
    // friends) when the volume is written back to NIfTI. Empty otherwise.
    const std::vector<std::byte>& io_header() const { return io_header_; }
    void set_io_header(std::vector<std::byte> header) { io_header_ = std::move(header); }

private:
    template <typename T>
    static constexpr DType dtype_of() {
        static_assert(std::is_same_v<T, std::uint8_t> || std::is_same_v<T, std::int32_t> ||
                          std::is_same_v<T, float>,
                      "volume element type must be uint8_t, int32_t or float");
        if constexpr (std::is_same_v<T, std::uint8_t>) return DType::u8;
        if constexpr (std::is_same_v<T, std::int32_t>) return DType::i32;
        return DType::f32;
    }

    void check_dtype(DType expected) const;

    Dims dims_{};
    Spacing spacing_{};
    DType dtype_ = DType::u8;
    std::vector<std::byte> data_;
    std::vector<std::byte> io_header_;
};

// Fill-constructor. The fill value is cast to the requested dtype.
Volume new_volume(Dims dims, Spacing spacing, DType dtype, double fill);

// A Volume of dtype u8 whose voxels are all 0 or 1.
struct BinaryMask {
    Volume vol;

    std::int64_t foreground_count() const;
};

// Integer vote counts per voxel, each in [0, n_views].
struct ConfidenceMap {
    Volume vol;
    std::int32_t n_views = 0;
};

// Connected-component labels: 0 background, 1..n_components in ascending
// order of each component's minimal canonical linear index.
struct LabelMap {
    Volume vol;
    std::int32_t n_components = 0;
};

// Validates dtype u8 and {0,1} values. Throws InvalidArgument otherwise.
BinaryMask make_mask(Volume v);

// Read-as-mask conversion: float voxels map to 1 iff value > threshold,
// integer voxels map to 1 iff nonzero.
BinaryMask binarize(const Volume& v, double threshold = 0.5);

}  // namespace slf
