#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "prefnet/prefmath.hpp"
#include "prefnet/selection.hpp"

namespace prefnet {

// "topic,node,ranking" with rankings in '>' form; absent rows are skipped
// responses.
void save_profiles(const TopicProfiles& profiles, const std::filesystem::path& path);
TopicProfiles load_profiles(const std::filesystem::path& path);

// "rank,node,weight"; weight column is 1 for unweighted selections.
void save_selection(const SelectionResult& result, const std::filesystem::path& path);

// "grid_value,count" over the normalized-distance grid.
void save_histogram(std::span<const double> histogram, int r,
                    const std::filesystem::path& path);
std::vector<double> load_histogram(const std::filesystem::path& path, int r);

}  // namespace prefnet
