#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace deltamsg {

// Whole-file helpers; both throw IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace deltamsg
