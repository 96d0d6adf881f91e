// Copyright 2026 The risklens Authors
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

#include "risklens/preprocess.h"

namespace risklens {

const ReplacementTable& BundledAcronyms() {
  static const ReplacementTable* const kTable = new ReplacementTable{
      {"adhd", "attention deficit hyperactivity disorder"},
      {"af", "as fuck"},
      {"afaik", "as far as i know"},
      {"asap", "as soon as possible"},
      {"atm", "at the moment"},
      {"b4", "before"},
      {"bc", "because"},
      {"bf", "boyfriend"},
      {"bpd", "borderline personality disorder"},
      {"btw", "by the way"},
      {"coz", "because"},
      {"cuz", "because"},
      {"dm", "direct message"},
      {"dw", "don't worry"},
      {"fml", "fuck my life"},
      {"fwiw", "for what it's worth"},
      {"fyi", "for your information"},
      {"gad", "generalized anxiety disorder"},
      {"gf", "girlfriend"},
      {"gonna", "going to"},
      {"idc", "i don't care"},
      {"idek", "i don't even know"},
      {"idgaf", "i don't give a fuck"},
      {"idk", "i don't know"},
      {"ig", "i guess"},
      {"iirc", "if i remember correctly"},
      {"ik", "i know"},
      {"ikr", "i know right"},
      {"ily", "i love you"},
      {"imho", "in my humble opinion"},
      {"imo", "in my opinion"},
      {"imy", "i miss you"},
      {"irl", "in real life"},
      {"jk", "just kidding"},
      {"kms", "kill myself"},
      {"kys", "kill yourself"},
      {"lmao", "laughing my ass off"},
      {"lmk", "let me know"},
      {"lol", "laughing out loud"},
      {"mdd", "major depressive disorder"},
      {"mh", "mental health"},
      {"ngl", "not going to lie"},
      {"np", "no problem"},
      {"nvm", "never mind"},
      {"ocd", "obsessive compulsive disorder"},
      {"od", "overdose"},
      {"ofc", "of course"},
      {"omg", "oh my god"},
      {"omw", "on my way"},
      {"pls", "please"},
      {"plz", "please"},
      {"ppl", "people"},
      {"ptsd", "post traumatic stress disorder"},
      {"rly", "really"},
      {"rn", "right now"},
      {"sh", "self harm"},
      {"si", "suicidal ideation"},
      {"smh", "shaking my head"},
      {"srsly", "seriously"},
      {"stfu", "shut the fuck up"},
      {"tbh", "to be honest"},
      {"thx", "thanks"},
      {"tldr", "too long didn't read"},
      {"tmi", "too much information"},
      {"ttyl", "talk to you later"},
      {"ty", "thank you"},
      {"u", "you"},
      {"ur", "your"},
      {"wanna", "want to"},
      {"wbu", "what about you"},
      {"wtf", "what the fuck"},
      {"yolo", "you only live once"},
  };
  return *kTable;
}

// Emotion-relevant emoji. Names follow the Unicode character names in
// snake case; pictographs that commonly carry U+FE0F appear in both forms.
const ReplacementTable& BundledEmoji() {
  static const ReplacementTable* const kTable = new ReplacementTable{
      {"😀", ":grinning_face:"},
      {"😁", ":grinning_face_with_smiling_eyes:"},
      {"😂", ":face_with_tears_of_joy:"},
      {"😃", ":smiling_face_with_open_mouth:"},
      {"😄", ":smiling_face_with_open_mouth_and_smiling_eyes:"},
      {"😅", ":smiling_face_with_open_mouth_and_cold_sweat:"},
      {"😆", ":smiling_face_with_open_mouth_and_tightly_closed_eyes:"},
      {"😇", ":smiling_face_with_halo:"},
      {"😈", ":smiling_face_with_horns:"},
      {"😉", ":winking_face:"},
      {"😊", ":smiling_face_with_smiling_eyes:"},
      {"😋", ":face_savouring_delicious_food:"},
      {"😌", ":relieved_face:"},
      {"😍", ":smiling_face_with_heart_shaped_eyes:"},
      {"😎", ":smiling_face_with_sunglasses:"},
      {"😏", ":smirking_face:"},
      {"😐", ":neutral_face:"},
      {"😑", ":expressionless_face:"},
      {"😒", ":unamused_face:"},
      {"😓", ":face_with_cold_sweat:"},
      {"😔", ":pensive_face:"},
      {"😕", ":confused_face:"},
      {"😖", ":confounded_face:"},
      {"😗", ":kissing_face:"},
      {"😘", ":face_throwing_a_kiss:"},
      {"😙", ":kissing_face_with_smiling_eyes:"},
      {"😚", ":kissing_face_with_closed_eyes:"},
      {"😛", ":face_with_stuck_out_tongue:"},
      {"😜", ":face_with_stuck_out_tongue_and_winking_eye:"},
      {"😝", ":face_with_stuck_out_tongue_and_tightly_closed_eyes:"},
      {"😞", ":disappointed_face:"},
      {"😟", ":worried_face:"},
      {"😠", ":angry_face:"},
      {"😡", ":pouting_face:"},
      {"😢", ":crying_face:"},
      {"😣", ":persevering_face:"},
      {"😤", ":face_with_look_of_triumph:"},
      {"😥", ":disappointed_but_relieved_face:"},
      {"😦", ":frowning_face_with_open_mouth:"},
      {"😧", ":anguished_face:"},
      {"😨", ":fearful_face:"},
      {"😩", ":weary_face:"},
      {"😪", ":sleepy_face:"},
      {"😫", ":tired_face:"},
      {"😬", ":grimacing_face:"},
      {"😭", ":loudly_crying_face:"},
      {"😮", ":face_with_open_mouth:"},
      {"😯", ":hushed_face:"},
      {"😰", ":face_with_open_mouth_and_cold_sweat:"},
      {"😱", ":face_screaming_in_fear:"},
      {"😲", ":astonished_face:"},
      {"😳", ":flushed_face:"},
      {"😴", ":sleeping_face:"},
      {"😵", ":dizzy_face:"},
      {"😶", ":face_without_mouth:"},
      {"😷", ":face_with_medical_mask:"},
      {"😸", ":grinning_cat_face_with_smiling_eyes:"},
      {"😹", ":cat_face_with_tears_of_joy:"},
      {"😺", ":smiling_cat_face_with_open_mouth:"},
      {"😻", ":smiling_cat_face_with_heart_shaped_eyes:"},
      {"😼", ":cat_face_with_wry_smile:"},
      {"😽", ":kissing_cat_face_with_closed_eyes:"},
      {"😾", ":pouting_cat_face:"},
      {"😿", ":crying_cat_face:"},
      {"🙀", ":weary_cat_face:"},
      {"🙁", ":slightly_frowning_face:"},
      {"🙂", ":slightly_smiling_face:"},
      {"🙃", ":upside_down_face:"},
      {"🙄", ":face_with_rolling_eyes:"},
      {"🙅", ":face_with_no_good_gesture:"},
      {"🙆", ":face_with_ok_gesture:"},
      {"🙇", ":person_bowing_deeply:"},
      {"🙈", ":see_no_evil_monkey:"},
      {"🙉", ":hear_no_evil_monkey:"},
      {"🙊", ":speak_no_evil_monkey:"},
      {"🙋", ":happy_person_raising_one_hand:"},
      {"🙌", ":person_raising_both_hands_in_celebration:"},
      {"🙍", ":person_frowning:"},
      {"🙎", ":person_with_pouting_face:"},
      {"🙏", ":person_with_folded_hands:"},
      {"🤐", ":zipper_mouth_face:"},
      {"🤑", ":money_mouth_face:"},
      {"🤒", ":face_with_thermometer:"},
      {"🤓", ":nerd_face:"},
      {"🤔", ":thinking_face:"},
      {"🤕", ":face_with_head_bandage:"},
      {"🤖", ":robot_face:"},
      {"🤗", ":hugging_face:"},
      {"🤘", ":sign_of_the_horns:"},
      {"🤙", ":call_me_hand:"},
      {"🤚", ":raised_back_of_hand:"},
      {"🤛", ":left_facing_fist:"},
      {"🤜", ":right_facing_fist:"},
      {"🤝", ":handshake:"},
      {"🤞", ":hand_with_index_and_middle_fingers_crossed:"},
      {"🤟", ":i_love_you_hand_sign:"},
      {"🤠", ":face_with_cowboy_hat:"},
      {"🤡", ":clown_face:"},
      {"🤢", ":nauseated_face:"},
      {"🤣", ":rolling_on_the_floor_laughing:"},
      {"🤤", ":drooling_face:"},
      {"🤥", ":lying_face:"},
      {"🤦", ":face_palm:"},
      {"🤧", ":sneezing_face:"},
      {"🤨", ":face_with_one_eyebrow_raised:"},
      {"🤩", ":grinning_face_with_star_eyes:"},
      {"🤪", ":grinning_face_with_one_large_and_one_small_eye:"},
      {"🤫", ":face_with_finger_covering_closed_lips:"},
      {"🤬", ":serious_face_with_symbols_covering_mouth:"},
      {"🤭", ":smiling_face_with_smiling_eyes_and_hand_covering_mouth:"},
      {"🤮", ":face_with_open_mouth_vomiting:"},
      {"🤯", ":shocked_face_with_exploding_head:"},
      {"🥰", ":smiling_face_with_smiling_eyes_and_three_hearts:"},
      {"🥱", ":yawning_face:"},
      {"🥲", ":smiling_face_with_tear:"},
      {"🥳", ":face_with_party_horn_and_party_hat:"},
      {"🥴", ":face_with_uneven_eyes_and_wavy_mouth:"},
      {"🥵", ":overheated_face:"},
      {"🥶", ":freezing_face:"},
      {"🥸", ":disguised_face:"},
      {"🥺", ":face_with_pleading_eyes:"},
      {"💓", ":beating_heart:"},
      {"💔", ":broken_heart:"},
      {"💕", ":two_hearts:"},
      {"💖", ":sparkling_heart:"},
      {"💗", ":growing_heart:"},
      {"💘", ":heart_with_arrow:"},
      {"💙", ":blue_heart:"},
      {"💚", ":green_heart:"},
      {"💛", ":yellow_heart:"},
      {"💜", ":purple_heart:"},
      {"💝", ":heart_with_ribbon:"},
      {"💞", ":revolving_hearts:"},
      {"💟", ":heart_decoration:"},
      {"🖤", ":black_heart:"},
      {"🤍", ":white_heart:"},
      {"🤎", ":brown_heart:"},
      {"🧡", ":orange_heart:"},
      {"👍", ":thumbs_up_sign:"},
      {"👎", ":thumbs_down_sign:"},
      {"👏", ":clapping_hands_sign:"},
      {"👋", ":waving_hand_sign:"},
      {"🔥", ":fire:"},
      {"💩", ":pile_of_poo:"},
      {"💤", ":sleeping_symbol:"},
      {"💧", ":droplet:"},
      {"💪", ":flexed_biceps:"},
      {"💯", ":hundred_points_symbol:"},
      {"💢", ":anger_symbol:"},
      {"💥", ":collision_symbol:"},
      {"💦", ":splashing_sweat_symbol:"},
      {"💨", ":dash_symbol:"},
      {"💀", ":skull:"},
      {"🔪", ":hocho:"},
      {"💊", ":pill:"},
      {"💉", ":syringe:"},
      {"🚬", ":smoking_symbol:"},
      {"🍺", ":beer_mug:"},
      {"🍷", ":wine_glass:"},
      {"🍸", ":cocktail_glass:"},
      {"🍻", ":clinking_beer_mugs:"},
      {"🥀", ":wilted_flower:"},
      {"🌟", ":glowing_star:"},
      {"🌈", ":rainbow:"},
      {"🌙", ":crescent_moon:"},
      {"🌞", ":sun_with_face:"},
      {"🌧", ":cloud_with_rain:"},
      {"🧠", ":brain:"},
      {"🧸", ":teddy_bear:"},
      {"🤌", ":pinched_fingers:"},
      {"👈", ":white_left_pointing_backhand_index:"},
      {"👉", ":white_right_pointing_backhand_index:"},
      {"👆", ":white_up_pointing_backhand_index:"},
      {"👇", ":white_down_pointing_backhand_index:"},
      {"👀", ":eyes:"},
      {"👁", ":eye:"},
      {"🎵", ":musical_note:"},
      {"🎶", ":multiple_musical_notes:"},
      {"👻", ":ghost:"},
      {"👿", ":imp:"},
      {"👹", ":japanese_ogre:"},
      {"👽", ":extraterrestrial_alien:"},
      {"🎃", ":jack_o_lantern:"},
      {"🎁", ":wrapped_present:"},
      {"🎂", ":birthday_cake:"},
      {"🎉", ":party_popper:"},
      {"🎊", ":confetti_ball:"},
      {"🏥", ":hospital:"},
      {"🚑", ":ambulance:"},
      {"🚨", ":police_cars_revolving_light:"},
      {"🔫", ":pistol:"},
      {"💣", ":bomb:"},
      {"💡", ":electric_light_bulb:"},
      {"📝", ":memo:"},
      {"📱", ":mobile_phone:"},
      {"💭", ":thought_balloon:"},
      {"💬", ":speech_balloon:"},
      {"🗯", ":right_anger_bubble:"},
      {"🧍", ":standing_person:"},
      {"🛌", ":sleeping_accommodation:"},
      {"❤", ":heavy_black_heart:"},
      {"❤️", ":heavy_black_heart:"},
      {"❣", ":heavy_heart_exclamation_mark_ornament:"},
      {"❣️", ":heavy_heart_exclamation_mark_ornament:"},
      {"☺", ":white_smiling_face:"},
      {"☺️", ":white_smiling_face:"},
      {"☹", ":white_frowning_face:"},
      {"☹️", ":white_frowning_face:"},
      {"☠", ":skull_and_crossbones:"},
      {"☠️", ":skull_and_crossbones:"},
      {"✌", ":victory_hand:"},
      {"✌️", ":victory_hand:"},
      {"☝", ":white_up_pointing_index:"},
      {"☝️", ":white_up_pointing_index:"},
      {"✨", ":sparkles:"},
      {"✨️", ":sparkles:"},
      {"⭐", ":white_medium_star:"},
      {"⭐️", ":white_medium_star:"},
      {"☀", ":black_sun_with_rays:"},
      {"☀️", ":black_sun_with_rays:"},
      {"☁", ":cloud:"},
      {"☁️", ":cloud:"},
      {"⚡", ":high_voltage_sign:"},
      {"⚡️", ":high_voltage_sign:"},
      {"❄", ":snowflake:"},
      {"❄️", ":snowflake:"},
      {"☔", ":umbrella_with_rain_drops:"},
      {"☔️", ":umbrella_with_rain_drops:"},
      {"⚰", ":coffin:"},
      {"⚰️", ":coffin:"},
      {"⚱", ":funeral_urn:"},
      {"⚱️", ":funeral_urn:"},
  };
  return *kTable;
}

}  // namespace risklens
