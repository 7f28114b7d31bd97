#pragma once

// Shared graph fixtures for the unit tests.

#include <cstdint>
#include <vector>

#include "forge/graph.hpp"
#include "forge/partition.hpp"

namespace fixture {

inline forge::Graph triangle() {
  return forge::Graph::build(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
}

// Two disjoint triangles, nodes 0-2 and 3-5.
inline forge::Graph two_triangles() {
  return forge::Graph::build(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                                 {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
}

// Two triangles joined by the bridge edge 2-3.
inline forge::Graph bridged_triangles() {
  return forge::Graph::build(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1},
                                 {3, 4, 1}, {4, 5, 1}, {3, 5, 1},
                                 {2, 3, 1}});
}

inline forge::Partition by_triangle() {
  forge::Partition p;
  p.assign = {0, 0, 0, 1, 1, 1};
  p.k = 2;
  return p;
}

// Path 0-1-2-3.
inline forge::Graph path4() {
  return forge::Graph::build(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
}

// Star with center 0 and `leaves` leaves.
inline forge::Graph star(std::uint32_t leaves) {
  std::vector<forge::Edge> e;
  for (std::uint32_t v = 1; v <= leaves; ++v) e.push_back({0, v, 1});
  return forge::Graph::build(leaves + 1, e);
}

inline forge::Partition single(std::size_t n) {
  forge::Partition p;
  p.assign.assign(n, 0);
  p.k = 1;
  return p;
}

inline forge::Partition singletons(std::size_t n) {
  forge::Partition p;
  for (std::size_t v = 0; v < n; ++v) p.assign.push_back(static_cast<std::uint32_t>(v));
  p.k = static_cast<std::uint32_t>(n);
  return p;
}

// Zachary karate club, 34 nodes, 78 edges.
inline forge::Graph karate() {
  static const std::uint32_t pairs[][2] = {
      {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},
      {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},
      {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},
      {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},
      {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
      {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33},
      {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
      {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25}, {24, 27},
      {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
      {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33}};
  std::vector<forge::Edge> e;
  for (const auto& pq : pairs) e.push_back({pq[0], pq[1], 1});
  return forge::Graph::build(34, e);
}

}  // namespace fixture
