#pragma once

// Shipped political-climate reference tables; identical to data/administrations.csv
// and data/state_votes.csv. PartyA = Democratic, PartyB = Republican.
// Elections 1976-2020; administrations 1977-01-20 to 2025-01-20.

namespace adjvar::reference_data {

inline constexpr const char* administrations_csv = R"csv(start_date,end_date,party
1977-01-20,1981-01-20,PartyA
1981-01-20,1989-01-20,PartyB
1989-01-20,1993-01-20,PartyB
1993-01-20,2001-01-20,PartyA
2001-01-20,2009-01-20,PartyB
2009-01-20,2017-01-20,PartyA
2017-01-20,2021-01-20,PartyB
2021-01-20,2025-01-20,PartyA
)csv";

inline constexpr const char* state_votes_csv = R"csv(state,election_year,party
AL,1976,PartyA
AK,1976,PartyB
AZ,1976,PartyB
AR,1976,PartyA
CA,1976,PartyB
CO,1976,PartyB
CT,1976,PartyB
DE,1976,PartyA
DC,1976,PartyA
FL,1976,PartyA
GA,1976,PartyA
HI,1976,PartyA
ID,1976,PartyB
IL,1976,PartyB
IN,1976,PartyB
IA,1976,PartyB
KS,1976,PartyB
KY,1976,PartyA
LA,1976,PartyA
ME,1976,PartyB
MD,1976,PartyA
MA,1976,PartyA
MI,1976,PartyB
MN,1976,PartyA
MS,1976,PartyA
MO,1976,PartyA
MT,1976,PartyB
NE,1976,PartyB
NV,1976,PartyB
NH,1976,PartyB
NJ,1976,PartyB
NM,1976,PartyB
NY,1976,PartyA
NC,1976,PartyA
ND,1976,PartyB
OH,1976,PartyA
OK,1976,PartyB
OR,1976,PartyB
PA,1976,PartyA
RI,1976,PartyA
SC,1976,PartyA
SD,1976,PartyB
TN,1976,PartyA
TX,1976,PartyA
UT,1976,PartyB
VT,1976,PartyB
VA,1976,PartyB
WA,1976,PartyB
WV,1976,PartyA
WI,1976,PartyA
WY,1976,PartyB
AL,1980,PartyB
AK,1980,PartyB
AZ,1980,PartyB
AR,1980,PartyB
CA,1980,PartyB
CO,1980,PartyB
CT,1980,PartyB
DE,1980,PartyB
DC,1980,PartyA
FL,1980,PartyB
GA,1980,PartyA
HI,1980,PartyA
ID,1980,PartyB
IL,1980,PartyB
IN,1980,PartyB
IA,1980,PartyB
KS,1980,PartyB
KY,1980,PartyB
LA,1980,PartyB
ME,1980,PartyB
MD,1980,PartyA
MA,1980,PartyB
MI,1980,PartyB
MN,1980,PartyA
MS,1980,PartyB
MO,1980,PartyB
MT,1980,PartyB
NE,1980,PartyB
NV,1980,PartyB
NH,1980,PartyB
NJ,1980,PartyB
NM,1980,PartyB
NY,1980,PartyB
NC,1980,PartyB
ND,1980,PartyB
OH,1980,PartyB
OK,1980,PartyB
OR,1980,PartyB
PA,1980,PartyB
RI,1980,PartyA
SC,1980,PartyB
SD,1980,PartyB
TN,1980,PartyB
TX,1980,PartyB
UT,1980,PartyB
VT,1980,PartyB
VA,1980,PartyB
WA,1980,PartyB
WV,1980,PartyA
WI,1980,PartyB
WY,1980,PartyB
AL,1984,PartyB
AK,1984,PartyB
AZ,1984,PartyB
AR,1984,PartyB
CA,1984,PartyB
CO,1984,PartyB
CT,1984,PartyB
DE,1984,PartyB
DC,1984,PartyA
FL,1984,PartyB
GA,1984,PartyB
HI,1984,PartyB
ID,1984,PartyB
IL,1984,PartyB
IN,1984,PartyB
IA,1984,PartyB
KS,1984,PartyB
KY,1984,PartyB
LA,1984,PartyB
ME,1984,PartyB
MD,1984,PartyB
MA,1984,PartyB
MI,1984,PartyB
MN,1984,PartyA
MS,1984,PartyB
MO,1984,PartyB
MT,1984,PartyB
NE,1984,PartyB
NV,1984,PartyB
NH,1984,PartyB
NJ,1984,PartyB
NM,1984,PartyB
NY,1984,PartyB
NC,1984,PartyB
ND,1984,PartyB
OH,1984,PartyB
OK,1984,PartyB
OR,1984,PartyB
PA,1984,PartyB
RI,1984,PartyB
SC,1984,PartyB
SD,1984,PartyB
TN,1984,PartyB
TX,1984,PartyB
UT,1984,PartyB
VT,1984,PartyB
VA,1984,PartyB
WA,1984,PartyB
WV,1984,PartyB
WI,1984,PartyB
WY,1984,PartyB
AL,1988,PartyB
AK,1988,PartyB
AZ,1988,PartyB
AR,1988,PartyB
CA,1988,PartyB
CO,1988,PartyB
CT,1988,PartyB
DE,1988,PartyB
DC,1988,PartyA
FL,1988,PartyB
GA,1988,PartyB
HI,1988,PartyA
ID,1988,PartyB
IL,1988,PartyB
IN,1988,PartyB
IA,1988,PartyA
KS,1988,PartyB
KY,1988,PartyB
LA,1988,PartyB
ME,1988,PartyB
MD,1988,PartyB
MA,1988,PartyA
MI,1988,PartyB
MN,1988,PartyA
MS,1988,PartyB
MO,1988,PartyB
MT,1988,PartyB
NE,1988,PartyB
NV,1988,PartyB
NH,1988,PartyB
NJ,1988,PartyB
NM,1988,PartyB
NY,1988,PartyA
NC,1988,PartyB
ND,1988,PartyB
OH,1988,PartyB
OK,1988,PartyB
OR,1988,PartyA
PA,1988,PartyB
RI,1988,PartyA
SC,1988,PartyB
SD,1988,PartyB
TN,1988,PartyB
TX,1988,PartyB
UT,1988,PartyB
VT,1988,PartyB
VA,1988,PartyB
WA,1988,PartyA
WV,1988,PartyA
WI,1988,PartyA
WY,1988,PartyB
AL,1992,PartyB
AK,1992,PartyB
AZ,1992,PartyB
AR,1992,PartyA
CA,1992,PartyA
CO,1992,PartyA
CT,1992,PartyA
DE,1992,PartyA
DC,1992,PartyA
FL,1992,PartyB
GA,1992,PartyA
HI,1992,PartyA
ID,1992,PartyB
IL,1992,PartyA
IN,1992,PartyB
IA,1992,PartyA
KS,1992,PartyB
KY,1992,PartyA
LA,1992,PartyA
ME,1992,PartyA
MD,1992,PartyA
MA,1992,PartyA
MI,1992,PartyA
MN,1992,PartyA
MS,1992,PartyB
MO,1992,PartyA
MT,1992,PartyA
NE,1992,PartyB
NV,1992,PartyA
NH,1992,PartyA
NJ,1992,PartyA
NM,1992,PartyA
NY,1992,PartyA
NC,1992,PartyB
ND,1992,PartyB
OH,1992,PartyA
OK,1992,PartyB
OR,1992,PartyA
PA,1992,PartyA
RI,1992,PartyA
SC,1992,PartyB
SD,1992,PartyB
TN,1992,PartyA
TX,1992,PartyB
UT,1992,PartyB
VT,1992,PartyA
VA,1992,PartyB
WA,1992,PartyA
WV,1992,PartyA
WI,1992,PartyA
WY,1992,PartyB
AL,1996,PartyB
AK,1996,PartyB
AZ,1996,PartyA
AR,1996,PartyA
CA,1996,PartyA
CO,1996,PartyB
CT,1996,PartyA
DE,1996,PartyA
DC,1996,PartyA
FL,1996,PartyA
GA,1996,PartyB
HI,1996,PartyA
ID,1996,PartyB
IL,1996,PartyA
IN,1996,PartyB
IA,1996,PartyA
KS,1996,PartyB
KY,1996,PartyA
LA,1996,PartyA
ME,1996,PartyA
MD,1996,PartyA
MA,1996,PartyA
MI,1996,PartyA
MN,1996,PartyA
MS,1996,PartyB
MO,1996,PartyA
MT,1996,PartyB
NE,1996,PartyB
NV,1996,PartyA
NH,1996,PartyA
NJ,1996,PartyA
NM,1996,PartyA
NY,1996,PartyA
NC,1996,PartyB
ND,1996,PartyB
OH,1996,PartyA
OK,1996,PartyB
OR,1996,PartyA
PA,1996,PartyA
RI,1996,PartyA
SC,1996,PartyB
SD,1996,PartyB
TN,1996,PartyA
TX,1996,PartyB
UT,1996,PartyB
VT,1996,PartyA
VA,1996,PartyB
WA,1996,PartyA
WV,1996,PartyA
WI,1996,PartyA
WY,1996,PartyB
AL,2000,PartyB
AK,2000,PartyB
AZ,2000,PartyB
AR,2000,PartyB
CA,2000,PartyA
CO,2000,PartyB
CT,2000,PartyA
DE,2000,PartyA
DC,2000,PartyA
FL,2000,PartyB
GA,2000,PartyB
HI,2000,PartyA
ID,2000,PartyB
IL,2000,PartyA
IN,2000,PartyB
IA,2000,PartyA
KS,2000,PartyB
KY,2000,PartyB
LA,2000,PartyB
ME,2000,PartyA
MD,2000,PartyA
MA,2000,PartyA
MI,2000,PartyA
MN,2000,PartyA
MS,2000,PartyB
MO,2000,PartyB
MT,2000,PartyB
NE,2000,PartyB
NV,2000,PartyB
NH,2000,PartyB
NJ,2000,PartyA
NM,2000,PartyA
NY,2000,PartyA
NC,2000,PartyB
ND,2000,PartyB
OH,2000,PartyB
OK,2000,PartyB
OR,2000,PartyA
PA,2000,PartyA
RI,2000,PartyA
SC,2000,PartyB
SD,2000,PartyB
TN,2000,PartyB
TX,2000,PartyB
UT,2000,PartyB
VT,2000,PartyA
VA,2000,PartyB
WA,2000,PartyA
WV,2000,PartyB
WI,2000,PartyA
WY,2000,PartyB
AL,2004,PartyB
AK,2004,PartyB
AZ,2004,PartyB
AR,2004,PartyB
CA,2004,PartyA
CO,2004,PartyB
CT,2004,PartyA
DE,2004,PartyA
DC,2004,PartyA
FL,2004,PartyB
GA,2004,PartyB
HI,2004,PartyA
ID,2004,PartyB
IL,2004,PartyA
IN,2004,PartyB
IA,2004,PartyB
KS,2004,PartyB
KY,2004,PartyB
LA,2004,PartyB
ME,2004,PartyA
MD,2004,PartyA
MA,2004,PartyA
MI,2004,PartyA
MN,2004,PartyA
MS,2004,PartyB
MO,2004,PartyB
MT,2004,PartyB
NE,2004,PartyB
NV,2004,PartyB
NH,2004,PartyA
NJ,2004,PartyA
NM,2004,PartyB
NY,2004,PartyA
NC,2004,PartyB
ND,2004,PartyB
OH,2004,PartyB
OK,2004,PartyB
OR,2004,PartyA
PA,2004,PartyA
RI,2004,PartyA
SC,2004,PartyB
SD,2004,PartyB
TN,2004,PartyB
TX,2004,PartyB
UT,2004,PartyB
VT,2004,PartyA
VA,2004,PartyB
WA,2004,PartyA
WV,2004,PartyB
WI,2004,PartyA
WY,2004,PartyB
AL,2008,PartyB
AK,2008,PartyB
AZ,2008,PartyB
AR,2008,PartyB
CA,2008,PartyA
CO,2008,PartyA
CT,2008,PartyA
DE,2008,PartyA
DC,2008,PartyA
FL,2008,PartyA
GA,2008,PartyB
HI,2008,PartyA
ID,2008,PartyB
IL,2008,PartyA
IN,2008,PartyA
IA,2008,PartyA
KS,2008,PartyB
KY,2008,PartyB
LA,2008,PartyB
ME,2008,PartyA
MD,2008,PartyA
MA,2008,PartyA
MI,2008,PartyA
MN,2008,PartyA
MS,2008,PartyB
MO,2008,PartyB
MT,2008,PartyB
NE,2008,PartyB
NV,2008,PartyA
NH,2008,PartyA
NJ,2008,PartyA
NM,2008,PartyA
NY,2008,PartyA
NC,2008,PartyA
ND,2008,PartyB
OH,2008,PartyA
OK,2008,PartyB
OR,2008,PartyA
PA,2008,PartyA
RI,2008,PartyA
SC,2008,PartyB
SD,2008,PartyB
TN,2008,PartyB
TX,2008,PartyB
UT,2008,PartyB
VT,2008,PartyA
VA,2008,PartyA
WA,2008,PartyA
WV,2008,PartyB
WI,2008,PartyA
WY,2008,PartyB
AL,2012,PartyB
AK,2012,PartyB
AZ,2012,PartyB
AR,2012,PartyB
CA,2012,PartyA
CO,2012,PartyA
CT,2012,PartyA
DE,2012,PartyA
DC,2012,PartyA
FL,2012,PartyA
GA,2012,PartyB
HI,2012,PartyA
ID,2012,PartyB
IL,2012,PartyA
IN,2012,PartyB
IA,2012,PartyA
KS,2012,PartyB
KY,2012,PartyB
LA,2012,PartyB
ME,2012,PartyA
MD,2012,PartyA
MA,2012,PartyA
MI,2012,PartyA
MN,2012,PartyA
MS,2012,PartyB
MO,2012,PartyB
MT,2012,PartyB
NE,2012,PartyB
NV,2012,PartyA
NH,2012,PartyA
NJ,2012,PartyA
NM,2012,PartyA
NY,2012,PartyA
NC,2012,PartyB
ND,2012,PartyB
OH,2012,PartyA
OK,2012,PartyB
OR,2012,PartyA
PA,2012,PartyA
RI,2012,PartyA
SC,2012,PartyB
SD,2012,PartyB
TN,2012,PartyB
TX,2012,PartyB
UT,2012,PartyB
VT,2012,PartyA
VA,2012,PartyA
WA,2012,PartyA
WV,2012,PartyB
WI,2012,PartyA
WY,2012,PartyB
AL,2016,PartyB
AK,2016,PartyB
AZ,2016,PartyB
AR,2016,PartyB
CA,2016,PartyA
CO,2016,PartyA
CT,2016,PartyA
DE,2016,PartyA
DC,2016,PartyA
FL,2016,PartyB
GA,2016,PartyB
HI,2016,PartyA
ID,2016,PartyB
IL,2016,PartyA
IN,2016,PartyB
IA,2016,PartyB
KS,2016,PartyB
KY,2016,PartyB
LA,2016,PartyB
ME,2016,PartyA
MD,2016,PartyA
MA,2016,PartyA
MI,2016,PartyB
MN,2016,PartyA
MS,2016,PartyB
MO,2016,PartyB
MT,2016,PartyB
NE,2016,PartyB
NV,2016,PartyA
NH,2016,PartyA
NJ,2016,PartyA
NM,2016,PartyA
NY,2016,PartyA
NC,2016,PartyB
ND,2016,PartyB
OH,2016,PartyB
OK,2016,PartyB
OR,2016,PartyA
PA,2016,PartyB
RI,2016,PartyA
SC,2016,PartyB
SD,2016,PartyB
TN,2016,PartyB
TX,2016,PartyB
UT,2016,PartyB
VT,2016,PartyA
VA,2016,PartyA
WA,2016,PartyA
WV,2016,PartyB
WI,2016,PartyB
WY,2016,PartyB
AL,2020,PartyB
AK,2020,PartyB
AZ,2020,PartyA
AR,2020,PartyB
CA,2020,PartyA
CO,2020,PartyA
CT,2020,PartyA
DE,2020,PartyA
DC,2020,PartyA
FL,2020,PartyB
GA,2020,PartyA
HI,2020,PartyA
ID,2020,PartyB
IL,2020,PartyA
IN,2020,PartyB
IA,2020,PartyB
KS,2020,PartyB
KY,2020,PartyB
LA,2020,PartyB
ME,2020,PartyA
MD,2020,PartyA
MA,2020,PartyA
MI,2020,PartyA
MN,2020,PartyA
MS,2020,PartyB
MO,2020,PartyB
MT,2020,PartyB
NE,2020,PartyB
NV,2020,PartyA
NH,2020,PartyA
NJ,2020,PartyA
NM,2020,PartyA
NY,2020,PartyA
NC,2020,PartyB
ND,2020,PartyB
OH,2020,PartyB
OK,2020,PartyB
OR,2020,PartyA
PA,2020,PartyA
RI,2020,PartyA
SC,2020,PartyB
SD,2020,PartyB
TN,2020,PartyB
TX,2020,PartyB
UT,2020,PartyB
VT,2020,PartyA
VA,2020,PartyA
WA,2020,PartyA
WV,2020,PartyB
WI,2020,PartyA
WY,2020,PartyB
)csv";

}  // namespace adjvar::reference_data
