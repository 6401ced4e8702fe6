// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/gtns.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <cstring>

namespace gsforge {

std::size_t TensorContainer::element_count() const {
    std::size_t n = 1;
    for (std::uint32_t d : dims) {
        n *= d;
    }
    return dims.empty() ? 0 : n;
}

TensorContainer TensorContainer::from_matrix(const Eigen::MatrixXd& m) {
    TensorContainer t;
    t.dtype = TensorDType::F64;
    t.dims = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
    t.f64.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            t.f64.push_back(m(r, c));
        }
    }
    return t;
}

TensorContainer TensorContainer::from_vector(const std::vector<double>& v) {
    TensorContainer t;
    t.dtype = TensorDType::F64;
    t.dims = {static_cast<std::uint32_t>(v.size())};
    t.f64 = v;
    return t;
}

TensorContainer TensorContainer::from_ints(const std::vector<std::int32_t>& v,
                                           std::vector<std::uint32_t> dims) {
    TensorContainer t;
    t.dtype = TensorDType::I32;
    t.dims = std::move(dims);
    t.i32 = v;
    return t;
}

Eigen::MatrixXd TensorContainer::as_matrix() const {
    if (dims.size() != 2) {
        throw InvalidInputError("tensor is not rank-2");
    }
    const std::vector<double> vals = as_doubles();
    Eigen::MatrixXd m(dims[0], dims[1]);
    for (std::uint32_t r = 0; r < dims[0]; ++r) {
        for (std::uint32_t c = 0; c < dims[1]; ++c) {
            m(r, c) = vals[static_cast<std::size_t>(r) * dims[1] + c];
        }
    }
    return m;
}

std::vector<double> TensorContainer::as_doubles() const {
    switch (dtype) {
        case TensorDType::F64: return f64;
        case TensorDType::F32: return {f32.begin(), f32.end()};
        case TensorDType::I32: throw InvalidInputError("tensor holds i32, expected floats");
    }
    return {};
}

std::vector<std::int32_t> TensorContainer::as_ints() const {
    if (dtype != TensorDType::I32) {
        throw InvalidInputError("tensor does not hold i32");
    }
    return i32;
}

void save_tensor(const std::filesystem::path& path, const TensorContainer& t) {
    const std::size_t n = t.element_count();
    std::vector<std::uint8_t> out;
    out.reserve(16 + t.dims.size() * 4 + n * 8);
    out.insert(out.end(), {'G', 'T', 'N', 'S'});
    auto put_u32 = [&](std::uint32_t v) {
        std::uint8_t b[4];
        std::memcpy(b, &v, 4);
        out.insert(out.end(), b, b + 4);
    };
    put_u32(1); // version
    put_u32(static_cast<std::uint32_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) {
        put_u32(d);
    }
    put_u32(static_cast<std::uint32_t>(t.dtype));

    const std::size_t payload_at = out.size();
    switch (t.dtype) {
        case TensorDType::F32:
            if (t.f32.size() != n) {
                throw InvalidInputError("tensor payload size does not match dims");
            }
            out.resize(payload_at + n * 4);
            std::memcpy(out.data() + payload_at, t.f32.data(), n * 4);
            break;
        case TensorDType::F64:
            if (t.f64.size() != n) {
                throw InvalidInputError("tensor payload size does not match dims");
            }
            out.resize(payload_at + n * 8);
            std::memcpy(out.data() + payload_at, t.f64.data(), n * 8);
            break;
        case TensorDType::I32:
            if (t.i32.size() != n) {
                throw InvalidInputError("tensor payload size does not match dims");
            }
            out.resize(payload_at + n * 4);
            std::memcpy(out.data() + payload_at, t.i32.data(), n * 4);
            break;
    }
    atomic_write_file(path, out);
}

TensorContainer load_tensor(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    std::size_t pos = 0;
    auto need = [&](std::size_t n, const char* what) {
        if (bytes.size() - pos < n) {
            throw ParseError("'" + path.string() + "': truncated " + what + " at byte " +
                             std::to_string(pos));
        }
    };
    need(4, "magic");
    if (std::memcmp(bytes.data(), "GTNS", 4) != 0) {
        throw ParseError("'" + path.string() + "': bad GTNS magic at byte 0");
    }
    pos = 4;
    auto get_u32 = [&](const char* what) {
        need(4, what);
        std::uint32_t v;
        std::memcpy(&v, bytes.data() + pos, 4);
        pos += 4;
        return v;
    };
    const std::uint32_t version = get_u32("version");
    if (version != 1) {
        throw ParseError("'" + path.string() + "': unsupported GTNS version " +
                         std::to_string(version));
    }
    const std::uint32_t rank = get_u32("rank");
    if (rank > 8) {
        throw ParseError("'" + path.string() + "': implausible GTNS rank " + std::to_string(rank));
    }
    TensorContainer t;
    t.dims.resize(rank);
    for (std::uint32_t i = 0; i < rank; ++i) {
        t.dims[i] = get_u32("dims");
    }
    const std::uint32_t tag = get_u32("dtype");
    if (tag > 2) {
        throw ParseError("'" + path.string() + "': unknown GTNS dtype tag " + std::to_string(tag));
    }
    t.dtype = static_cast<TensorDType>(tag);

    const std::size_t n = t.element_count();
    const std::size_t esize = t.dtype == TensorDType::F64 ? 8 : 4;
    need(n * esize, "payload");
    if (bytes.size() != pos + n * esize) {
        throw ParseError("'" + path.string() + "': GTNS payload size mismatch (have " +
                         std::to_string(bytes.size() - pos) + " bytes, need " +
                         std::to_string(n * esize) + ")");
    }
    switch (t.dtype) {
        case TensorDType::F32:
            t.f32.resize(n);
            std::memcpy(t.f32.data(), bytes.data() + pos, n * 4);
            break;
        case TensorDType::F64:
            t.f64.resize(n);
            std::memcpy(t.f64.data(), bytes.data() + pos, n * 8);
            break;
        case TensorDType::I32:
            t.i32.resize(n);
            std::memcpy(t.i32.data(), bytes.data() + pos, n * 4);
            break;
    }
    return t;
}

} // namespace gsforge
