// Copyright 2026 The MFG-OMD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Small helpers for the CSV files written by the library. Rows end in CRLF.

#ifndef MFG_CSV_H_
#define MFG_CSV_H_

#include <string>
#include <vector>

namespace mfg {

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

// Whole-field parse; throws kIo on malformed input.
double ParseDouble(const std::string& field);
int ParseInt(const std::string& field);

// Splits on commas. Fields in these files never need quoting.
std::vector<std::string> SplitCsvLine(const std::string& line);

}  // namespace mfg

#endif  // MFG_CSV_H_
