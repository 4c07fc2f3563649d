#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <gtest/gtest.h>

// Fresh scratch directory per test, removed afterwards.
inline std::filesystem::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() / "iflt_tests" /
             (std::string(info->test_suite_name()) + "_" + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}
