#pragma once

#define HBFSM_VERSION "1.0.0"
