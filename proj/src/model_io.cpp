/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "hats/neural.hpp"

namespace hats {

namespace {

constexpr char kMagic[8] = {'H', 'A', 'T', 'S', 'M', 'L', 'P', '1'};
// Refuse absurd headers before allocating.
constexpr std::uint32_t kMaxLayers = 1024;
constexpr std::uint32_t kMaxWidth = 1u << 20;

void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double d)
{
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    std::uint32_t u32(const char* what)
    {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    double f64(const char* what)
    {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    void skip(std::size_t n, const char* what)
    {
        need(n, what);
        pos_ += n;
    }

    void need(std::size_t n, const char* what) const
    {
        if (remaining() < n)
            throw FormatViolation(pos_, std::string("truncated while reading ") + what);
    }

private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

void save_model(const MlpModel& model, std::ostream& os)
{
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(model.layer_sizes.size()));
    for (std::size_t n : model.layer_sizes)
        put_u32(out, static_cast<std::uint32_t>(n));
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        for (double w : model.weights[l].data())
            put_f64(out, w);
        for (double b : model.biases[l])
            put_f64(out, b);
    }
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!os)
        throw Error(ErrorCode::InvalidConfig, "failed writing model stream");
}

void save_model(const MlpModel& model, const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string() + " for writing");
    save_model(model, os);
}

MlpModel load_model(std::istream& is)
{
    const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    Reader body(bytes);

    body.need(sizeof kMagic, "magic");
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw FormatViolation(0, "bad magic");
    body.skip(sizeof kMagic, "magic");

    const std::size_t count_at = body.offset();
    const std::uint32_t count = body.u32("layer count");
    if (count < 2 || count > kMaxLayers)
        throw FormatViolation(count_at, "layer count " + std::to_string(count) + " out of range");

    std::vector<std::size_t> sizes;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t at = body.offset();
        const std::uint32_t n = body.u32("layer size");
        if (n == 0 || n > kMaxWidth)
            throw FormatViolation(at, "layer size " + std::to_string(n) + " out of range");
        sizes.push_back(n);
    }
    if (sizes.back() != 1)
        throw Error(ErrorCode::SizeMismatch, "output layer has " + std::to_string(sizes.back()) + " neurons, expected 1");

    std::size_t expected = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l)
        expected += sizes[l] * sizes[l - 1] + sizes[l];
    body.need(expected * 8, "parameters");

    MlpModel model(sizes);
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        for (double& w : model.weights[l].data())
            w = body.f64("weight");
        for (double& b : model.biases[l])
            b = body.f64("bias");
    }
    if (body.remaining() != 0)
        throw Error(ErrorCode::SizeMismatch, std::to_string(body.remaining()) + " trailing bytes after parameters");
    return model;
}

MlpModel load_model(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error(ErrorCode::InvalidConfig, "cannot open model file " + path.string());
    return load_model(is);
}

} // namespace hats
