#pragma once

// Reader/writer for the line-delimited campaign format (docs/format.md).
// The writer output is canonical: loading and re-serializing any valid
// file yields byte-identical text.

#include "eerg/campaign.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace eerg {

inline constexpr int kCampaignFormatVersion = 1;

// Throws IoError if the file cannot be read, ParseError (with line
// number) on malformed records, ValidationError on invariant violations.
// Permissive mode registers entities/edges that chains mention but the
// registry section omits; strict mode rejects them.
Campaign load_campaign(const std::filesystem::path& path,
                       ChainParseMode mode = ChainParseMode::Strict);

Campaign parse_campaign(std::istream& in,
                        ChainParseMode mode = ChainParseMode::Strict);

std::string serialize_campaign(const Campaign& campaign);

void save_campaign(const Campaign& campaign,
                   const std::filesystem::path& path);

}  // namespace eerg
