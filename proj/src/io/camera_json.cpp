// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/camera_json.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <json.hpp>

namespace gsforge {

using nlohmann::json;

std::vector<CameraModel> load_camera_manifest(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
    if (!doc.contains("cameras") || !doc["cameras"].is_array()) {
        throw ParseError("'" + path.string() + "': missing 'cameras' array");
    }
    std::vector<CameraModel> cams;
    for (const json& c : doc["cameras"]) {
        try {
            CameraModel cam;
            cam.view_id = c.at("view_id").get<std::string>();
            cam.fx = c.at("fx").get<double>();
            cam.fy = c.at("fy").get<double>();
            cam.cx = c.at("cx").get<double>();
            cam.cy = c.at("cy").get<double>();
            cam.width = c.at("width").get<int>();
            cam.height = c.at("height").get<int>();
            const auto r = c.at("R_wc").get<std::vector<double>>();
            const auto t = c.at("t_wc").get<std::vector<double>>();
            if (r.size() != 9 || t.size() != 3) {
                throw ParseError("'" + path.string() + "': camera '" + cam.view_id +
                                 "': R_wc must have 9 entries and t_wc 3");
            }
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    cam.rotation_wc(i, j) = r[i * 3 + j];
                }
                cam.translation_wc[i] = t[i];
            }
            cam.validate();
            cams.push_back(std::move(cam));
        } catch (const json::exception& e) {
            throw ParseError("'" + path.string() + "': malformed camera entry: " + e.what());
        }
    }
    return cams;
}

void save_camera_manifest(const std::filesystem::path& path,
                          const std::vector<CameraModel>& cameras) {
    json doc;
    doc["cameras"] = json::array();
    for (const CameraModel& cam : cameras) {
        json c;
        c["view_id"] = cam.view_id;
        c["fx"] = cam.fx;
        c["fy"] = cam.fy;
        c["cx"] = cam.cx;
        c["cy"] = cam.cy;
        c["width"] = cam.width;
        c["height"] = cam.height;
        std::vector<double> r(9), t(3);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                r[i * 3 + j] = cam.rotation_wc(i, j);
            }
            t[i] = cam.translation_wc[i];
        }
        c["R_wc"] = r;
        c["t_wc"] = t;
        doc["cameras"].push_back(std::move(c));
    }
    atomic_write_file(path, doc.dump(2) + "\n");
}

} // namespace gsforge
