#pragma once

#include <string>

#include "slf/volume.hpp"

namespace slf {

enum class FileFormat { auto_detect, nifti, mvol };

// auto_detect resolves by extension (.mvol / .nii / .nii.gz), falling back to
// content sniffing on read.
FileFormat detect_format(const std::string& path);

// Reads a NIfTI-1 single-file volume (optionally gzip-compressed) or an MVOL
// file into canonical layout. int16 NIfTI payloads widen to int32; all other
// datatypes map 1:1. Throws FormatError (with byte offset) on malformed
// content, IoError when the file cannot be opened.
Volume read_volume(const std::string& path, FileFormat format = FileFormat::auto_detect);

// Writes bit-exactly: read_volume(write_volume(v)) == v for both formats.
// NIfTI output reuses the header captured at read time, when present, so
// orientation fields pass through untouched.
void write_volume(const Volume& v, const std::string& path,
                  FileFormat format = FileFormat::auto_detect);

// read_volume followed by binarize: float voxels > threshold, ints nonzero.
BinaryMask read_mask(const std::string& path, double threshold = 0.5,
                     FileFormat format = FileFormat::auto_detect);

}  // namespace slf
