#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "sonotact/errors.hpp"
#include "sonotact/hash.hpp"

namespace sonotact {

// Dense row-major tensor. float carries all pipeline data; double is used
// where tests need 64-bit arithmetic (gradient checks, accumulators).
template <typename T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::uint32_t> dims) : dims_(std::move(dims)) {
        data_.assign(element_count(dims_), T(0));
    }

    Tensor(std::initializer_list<std::uint32_t> dims)
        : Tensor(std::vector<std::uint32_t>(dims)) {}

    static std::size_t element_count(const std::vector<std::uint32_t>& dims) {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return dims.empty() ? 0 : n;
    }

    const std::vector<std::uint32_t>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    // 2D [H,W]
    T& at(std::size_t y, std::size_t x) { return data_[y * dims_[1] + x]; }
    const T& at(std::size_t y, std::size_t x) const { return data_[y * dims_[1] + x]; }

    // 3D [C,H,W]
    T& at(std::size_t c, std::size_t y, std::size_t x) {
        return data_[(c * dims_[1] + y) * dims_[2] + x];
    }
    const T& at(std::size_t c, std::size_t y, std::size_t x) const {
        return data_[(c * dims_[1] + y) * dims_[2] + x];
    }

    void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

    bool all_finite() const {
        for (const T& v : data_)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    bool same_shape(const Tensor& other) const { return dims_ == other.dims_; }

    template <typename U>
    Tensor<U> cast() const {
        Tensor<U> out(dims_);
        for (std::size_t i = 0; i < data_.size(); ++i)
            out[i] = static_cast<U>(data_[i]);
        return out;
    }

    bool operator==(const Tensor& other) const {
        return dims_ == other.dims_ &&
               std::memcmp(data_.data(), other.data_.data(),
                           data_.size() * sizeof(T)) == 0;
    }

private:
    std::vector<std::uint32_t> dims_;
    std::vector<T> data_;
};

using TensorF = Tensor<float>;

// ---------------------------------------------------------------------------
// .sntt blob container.
// Layout: magic "SNTT" | u8 version=1 | u8 dtype (1 = f32 LE) | u8 ndims |
//         u32 LE dims[ndims] | payload row-major | u32 LE CRC32(payload).
// ---------------------------------------------------------------------------

namespace sntt {

inline constexpr char kMagic[4] = {'S', 'N', 'T', 'T'};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::uint8_t kDtypeF32 = 1;

inline void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

inline std::string encode(const TensorF& t) {
    if (t.dims().empty())
        throw Error(ErrorCode::ShapeMismatch, "refusing to encode tensor with no dims");
    std::string out;
    out.append(kMagic, 4);
    out.push_back(static_cast<char>(kVersion));
    out.push_back(static_cast<char>(kDtypeF32));
    out.push_back(static_cast<char>(t.dims().size()));
    for (auto d : t.dims()) put_u32_le(out, d);

    std::string payload(t.size() * sizeof(float), '\0');
    static_assert(sizeof(float) == 4);
    std::memcpy(payload.data(), t.data(), payload.size());
    out += payload;
    put_u32_le(out, crc32(payload.data(), payload.size()));
    return out;
}

inline TensorF decode(const unsigned char* p, std::size_t available,
                      std::size_t* consumed = nullptr) {
    if (available < 7) throw Error(ErrorCode::TruncatedBlob, "header cut short");
    if (std::memcmp(p, kMagic, 4) != 0)
        throw Error(ErrorCode::BadMagic, "not an SNTT blob");
    if (p[4] != kVersion)
        throw Error(ErrorCode::BadMagic, "unsupported SNTT version");
    if (p[5] != kDtypeF32)
        throw Error(ErrorCode::BadMagic, "unsupported dtype");
    const std::size_t ndims = p[6];
    if (ndims == 0) throw Error(ErrorCode::TruncatedBlob, "tensor with zero dims");
    std::size_t off = 7;
    if (available < off + 4 * ndims)
        throw Error(ErrorCode::TruncatedBlob, "dims cut short");
    std::vector<std::uint32_t> dims(ndims);
    for (std::size_t i = 0; i < ndims; ++i) {
        dims[i] = get_u32_le(p + off);
        off += 4;
    }
    const std::size_t count = TensorF::element_count(dims);
    const std::size_t payload_bytes = count * sizeof(float);
    if (available < off + payload_bytes + 4)
        throw Error(ErrorCode::TruncatedBlob, "payload cut short");
    TensorF t(dims);
    std::memcpy(t.data(), p + off, payload_bytes);
    off += payload_bytes;
    const std::uint32_t stored = get_u32_le(p + off);
    off += 4;
    if (stored != crc32(p + off - 4 - payload_bytes, payload_bytes))
        throw Error(ErrorCode::ChecksumMismatch, "payload CRC mismatch");
    if (consumed) *consumed = off;
    return t;
}

}  // namespace sntt

// Appends one tensor blob to an open stream; returns the byte offset at which
// the blob starts.
inline std::uint64_t write_tensor(std::ofstream& out, const TensorF& t) {
    const std::string blob = sntt::encode(t);
    const auto offset = static_cast<std::uint64_t>(out.tellp());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "tensor write failed");
    return offset;
}

inline TensorF read_tensor(std::ifstream& in, std::uint64_t offset) {
    in.clear();
    in.seekg(static_cast<std::streamoff>(offset));
    std::vector<unsigned char> buf(7);
    if (!in.read(reinterpret_cast<char*>(buf.data()), 7))
        throw Error(ErrorCode::TruncatedBlob, "header cut short");
    const std::size_t ndims = buf[6];
    buf.resize(7 + 4 * ndims);
    if (ndims > 0 &&
        !in.read(reinterpret_cast<char*>(buf.data() + 7),
                 static_cast<std::streamsize>(4 * ndims)))
        throw Error(ErrorCode::TruncatedBlob, "dims cut short");
    std::vector<std::uint32_t> dims(ndims);
    for (std::size_t i = 0; i < ndims; ++i)
        dims[i] = sntt::get_u32_le(buf.data() + 7 + 4 * i);
    const std::size_t payload_bytes = TensorF::element_count(dims) * sizeof(float);
    const std::size_t header_bytes = buf.size();
    buf.resize(header_bytes + payload_bytes + 4);
    if (!in.read(reinterpret_cast<char*>(buf.data() + header_bytes),
                 static_cast<std::streamsize>(payload_bytes + 4)))
        throw Error(ErrorCode::TruncatedBlob, "payload cut short");
    return sntt::decode(buf.data(), buf.size());
}

inline TensorF read_tensor(const std::string& path, std::uint64_t offset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
    return read_tensor(in, offset);
}

}  // namespace sonotact
