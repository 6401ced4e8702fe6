// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gsforge {

enum class TensorDType : std::uint32_t { F32 = 0, F64 = 1, I32 = 2 };

// Little-endian binary tensor: "GTNS", u32 version (1), u32 rank,
// u32 dims[rank], u32 dtype tag, row-major payload.
struct TensorContainer {
    TensorDType dtype = TensorDType::F64;
    std::vector<std::uint32_t> dims;
    std::vector<float> f32;
    std::vector<double> f64;
    std::vector<std::int32_t> i32;

    std::size_t element_count() const;

    static TensorContainer from_matrix(const Eigen::MatrixXd& m);
    static TensorContainer from_vector(const std::vector<double>& v);
    static TensorContainer from_ints(const std::vector<std::int32_t>& v,
                                     std::vector<std::uint32_t> dims);

    Eigen::MatrixXd as_matrix() const;      // rank-2 f32/f64
    std::vector<double> as_doubles() const; // any rank, f32/f64
    std::vector<std::int32_t> as_ints() const;
};

void save_tensor(const std::filesystem::path& path, const TensorContainer& t);
TensorContainer load_tensor(const std::filesystem::path& path);

} // namespace gsforge
