#include "mimic/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "mimic/error.hpp"

namespace mimic {

void InpaintOptions::validate() const
{
    if (max_iterations < 0)
        throw ValidationError("inpaint options: max_iterations must be >= 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ValidationError("inpaint options: epsilon must be positive");
}

void to_json(nlohmann::json& j, const InpaintOptions& o)
{
    j = {{"mirror_prior", o.mirror_prior}, {"max_iterations", o.max_iterations}, {"epsilon", o.epsilon}};
}

void from_json(const nlohmann::json& j, InpaintOptions& o)
{
    if (!j.is_object())
        throw ValidationError("inpaint options: expected a JSON object");
    static const std::set<std::string> known = {"mirror_prior", "max_iterations", "epsilon"};
    for (const auto& item : j.items())
        if (!known.contains(item.key()))
            throw ValidationError("inpaint options: unknown key '" + item.key() + "'");
    try {
        if (j.contains("mirror_prior"))
            o.mirror_prior = j.at("mirror_prior").get<bool>();
        if (j.contains("max_iterations"))
            o.max_iterations = j.at("max_iterations").get<int>();
        if (j.contains("epsilon"))
            o.epsilon = j.at("epsilon").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("inpaint options: ") + e.what());
    }
    o.validate();
}

HarmonicInpainter::HarmonicInpainter(InpaintOptions options) : options_(options)
{
    options_.validate();
}

namespace {

enum State : std::uint8_t { kUnknown = 0, kKnown = 1, kFilled = 2 };

}  // namespace

TextureMap HarmonicInpainter::inpaint(const TextureMap& partial, const VisibilityMask& mask,
                                      const IslandMap& islands) const
{
    const int res = partial.resolution();
    if (mask.resolution() != res || islands.resolution != res)
        throw ValidationError("inpaint: texture (" + std::to_string(res) + "), mask (" +
                              std::to_string(mask.resolution()) + ") and island map (" +
                              std::to_string(islands.resolution) + ") resolutions differ");
    const std::size_t n = static_cast<std::size_t>(res) * static_cast<std::size_t>(res);

    std::vector<std::array<double, 3>> value(n);
    std::vector<std::uint8_t> state(n, kUnknown);
    const auto& px = partial.texels().data();
    for (std::size_t i = 0; i < n; ++i) {
        value[i] = {double(px[3 * i]), double(px[3 * i + 1]), double(px[3 * i + 2])};
        if (mask.at_index(i) || islands.labels[i] < 0)
            state[i] = kKnown;
    }

    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < n; ++i)
        if (state[i] == kUnknown)
            targets.push_back(i);

    if (options_.mirror_prior) {
        for (std::size_t i : targets) {
            const std::size_t row = i / res, col = i % res;
            const std::size_t mirror = row * res + (res - 1 - col);
            if (mask.at_index(mirror)) {
                value[i] = value[mirror];
                state[i] = kKnown;
            }
        }
        std::erase_if(targets, [&](std::size_t i) { return state[i] == kKnown; });
    }

    // Same-island 4-neighbors of each target; unmapped texels never qualify.
    std::vector<std::array<std::int64_t, 4>> neighbors(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const std::size_t i = targets[t];
        const int row = static_cast<int>(i / res), col = static_cast<int>(i % res);
        const std::int32_t label = islands.labels[i];
        auto& nb = neighbors[t];
        nb.fill(-1);
        const int offsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        for (int k = 0; k < 4; ++k) {
            const int r = row + offsets[k][1], c = col + offsets[k][0];
            if (r < 0 || c < 0 || r >= res || c >= res)
                continue;
            const std::size_t j = static_cast<std::size_t>(r) * res + c;
            if (islands.labels[j] == label)
                nb[k] = static_cast<std::int64_t>(j);
        }
    }

    // Jacobi iteration: every update reads only the previous sweep's values.
    std::vector<std::array<double, 3>> next_value = value;
    std::vector<std::uint8_t> next_state = state;
    for (int iter = 0; iter < options_.max_iterations && !targets.empty(); ++iter) {
        bool grew = false;
        double max_change = 0.0;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const std::size_t i = targets[t];
            std::array<double, 3> sum{};
            int count = 0;
            for (std::int64_t j : neighbors[t]) {
                if (j < 0 || state[static_cast<std::size_t>(j)] == kUnknown)
                    continue;
                for (int k = 0; k < 3; ++k)
                    sum[k] += value[static_cast<std::size_t>(j)][k];
                ++count;
            }
            if (count == 0)
                continue;
            for (double& s : sum)
                s /= count;
            if (state[i] == kFilled) {
                for (int k = 0; k < 3; ++k)
                    max_change = std::max(max_change, std::abs(sum[k] - value[i][k]));
            } else {
                grew = true;
            }
            next_value[i] = sum;
            next_state[i] = kFilled;
        }
        for (std::size_t i : targets) {
            value[i] = next_value[i];
            state[i] = next_state[i];
        }
        if (!grew && max_change < options_.epsilon)
            break;
    }

    // Islands with no boundary data at all fall back to the mean visible color.
    std::array<double, 3> mean{};
    std::size_t visible = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask.at_index(i) && islands.labels[i] >= 0) {
            for (int k = 0; k < 3; ++k)
                mean[k] += value[i][k];
            ++visible;
        }
    }
    if (visible > 0)
        for (double& m : mean)
            m /= static_cast<double>(visible);

    TextureMap out = partial;
    for (std::size_t i : targets) {
        const int row = static_cast<int>(i / res), col = static_cast<int>(i % res);
        out.set(col, row, to_rgb(state[i] == kFilled ? value[i] : mean));
    }
    // Mirror seeds were promoted to known and removed from targets; write them too.
    for (std::size_t i = 0; i < n; ++i) {
        if (state[i] == kKnown && !mask.at_index(i) && islands.labels[i] >= 0) {
            const int row = static_cast<int>(i / res), col = static_cast<int>(i % res);
            out.set(col, row, to_rgb(value[i]));
        }
    }
    return out;
}

TextureMap inpaint_texture(const TextureMap& partial, const VisibilityMask& mask, const IslandMap& islands,
                           const InpaintOptions& options)
{
    return HarmonicInpainter(options).inpaint(partial, mask, islands);
}

}  // namespace mimic
