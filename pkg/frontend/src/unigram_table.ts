/**
 * Bundled unigram frequency table for the client-side complexity proxy.
 * Rank order mirrors the analyzer's reference vocabulary; weights follow
 * the same Zipf law (1 / (rank + 2.7) ** 1.05). Out-of-vocabulary words
 * take the tail rank. Generated from the analyzer word list; regenerate
 * whenever that list changes.
 */

export const WORD_RANK: ReadonlyMap<string, number> = new Map([
  ["the", 0],
  ["of", 1],
  ["and", 2],
  ["to", 3],
  ["a", 4],
  ["in", 5],
  ["is", 6],
  ["it", 7],
  ["was", 8],
  ["for", 9],
  ["on", 10],
  ["as", 11],
  ["are", 12],
  ["with", 13],
  ["they", 14],
  ["be", 15],
  ["at", 16],
  ["one", 17],
  ["have", 18],
  ["this", 19],
  ["from", 20],
  ["or", 21],
  ["had", 22],
  ["by", 23],
  ["not", 24],
  ["but", 25],
  ["what", 26],
  ["all", 27],
  ["were", 28],
  ["we", 29],
  ["when", 30],
  ["your", 31],
  ["can", 32],
  ["said", 33],
  ["there", 34],
  ["use", 35],
  ["an", 36],
  ["each", 37],
  ["which", 38],
  ["she", 39],
  ["do", 40],
  ["how", 41],
  ["their", 42],
  ["if", 43],
  ["will", 44],
  ["up", 45],
  ["other", 46],
  ["about", 47],
  ["out", 48],
  ["many", 49],
  ["then", 50],
  ["them", 51],
  ["these", 52],
  ["so", 53],
  ["some", 54],
  ["her", 55],
  ["would", 56],
  ["make", 57],
  ["like", 58],
  ["him", 59],
  ["into", 60],
  ["time", 61],
  ["has", 62],
  ["look", 63],
  ["two", 64],
  ["more", 65],
  ["write", 66],
  ["go", 67],
  ["see", 68],
  ["no", 69],
  ["way", 70],
  ["could", 71],
  ["people", 72],
  ["my", 73],
  ["than", 74],
  ["first", 75],
  ["been", 76],
  ["call", 77],
  ["who", 78],
  ["its", 79],
  ["now", 80],
  ["find", 81],
  ["long", 82],
  ["down", 83],
  ["day", 84],
  ["did", 85],
  ["get", 86],
  ["come", 87],
  ["made", 88],
  ["may", 89],
  ["part", 90],
  ["over", 91],
  ["new", 92],
  ["sound", 93],
  ["take", 94],
  ["only", 95],
  ["little", 96],
  ["work", 97],
  ["know", 98],
  ["place", 99],
  ["year", 100],
  ["live", 101],
  ["me", 102],
  ["back", 103],
  ["give", 104],
  ["most", 105],
  ["very", 106],
  ["after", 107],
  ["thing", 108],
  ["our", 109],
  ["just", 110],
  ["name", 111],
  ["good", 112],
  ["man", 113],
  ["think", 114],
  ["say", 115],
  ["great", 116],
  ["where", 117],
  ["help", 118],
  ["through", 119],
  ["much", 120],
  ["before", 121],
  ["line", 122],
  ["right", 123],
  ["too", 124],
  ["mean", 125],
  ["old", 126],
  ["any", 127],
  ["same", 128],
  ["tell", 129],
  ["boy", 130],
  ["follow", 131],
  ["came", 132],
  ["want", 133],
  ["show", 134],
  ["also", 135],
  ["around", 136],
  ["form", 137],
  ["three", 138],
  ["small", 139],
  ["set", 140],
  ["put", 141],
  ["end", 142],
  ["does", 143],
  ["another", 144],
  ["well", 145],
  ["large", 146],
  ["must", 147],
  ["big", 148],
  ["even", 149],
  ["such", 150],
  ["because", 151],
  ["turn", 152],
  ["here", 153],
  ["why", 154],
  ["ask", 155],
  ["went", 156],
  ["men", 157],
  ["read", 158],
  ["need", 159],
  ["land", 160],
  ["different", 161],
  ["home", 162],
  ["us", 163],
  ["move", 164],
  ["try", 165],
  ["kind", 166],
  ["hand", 167],
  ["picture", 168],
  ["again", 169],
  ["change", 170],
  ["off", 171],
  ["play", 172],
  ["spell", 173],
  ["air", 174],
  ["away", 175],
  ["animal", 176],
  ["house", 177],
  ["point", 178],
  ["page", 179],
  ["letter", 180],
  ["mother", 181],
  ["answer", 182],
  ["found", 183],
  ["study", 184],
  ["still", 185],
  ["learn", 186],
  ["should", 187],
  ["world", 188],
  ["high", 189],
  ["every", 190],
  ["near", 191],
  ["add", 192],
  ["food", 193],
  ["between", 194],
  ["own", 195],
  ["below", 196],
  ["country", 197],
  ["plant", 198],
  ["last", 199],
  ["school", 200],
  ["father", 201],
  ["keep", 202],
  ["tree", 203],
  ["never", 204],
  ["start", 205],
  ["city", 206],
  ["earth", 207],
  ["eye", 208],
  ["light", 209],
  ["thought", 210],
  ["head", 211],
  ["under", 212],
  ["story", 213],
  ["saw", 214],
  ["left", 215],
  ["few", 216],
  ["while", 217],
  ["along", 218],
  ["might", 219],
  ["close", 220],
  ["something", 221],
  ["seem", 222],
  ["next", 223],
  ["hard", 224],
  ["open", 225],
  ["example", 226],
  ["begin", 227],
  ["life", 228],
  ["always", 229],
  ["those", 230],
  ["both", 231],
  ["paper", 232],
  ["together", 233],
  ["got", 234],
  ["group", 235],
  ["often", 236],
  ["run", 237],
  ["important", 238],
  ["until", 239],
  ["children", 240],
  ["side", 241],
  ["feet", 242],
  ["car", 243],
  ["mile", 244],
  ["night", 245],
  ["walk", 246],
  ["white", 247],
  ["sea", 248],
  ["began", 249],
  ["grow", 250],
  ["took", 251],
  ["river", 252],
  ["four", 253],
  ["carry", 254],
  ["state", 255],
  ["once", 256],
  ["book", 257],
  ["hear", 258],
  ["stop", 259],
  ["without", 260],
  ["second", 261],
  ["later", 262],
  ["miss", 263],
  ["idea", 264],
  ["enough", 265],
  ["eat", 266],
  ["face", 267],
  ["watch", 268],
  ["far", 269],
  ["really", 270],
  ["almost", 271],
  ["let", 272],
  ["above", 273],
  ["girl", 274],
  ["sometimes", 275],
  ["mountain", 276],
  ["cut", 277],
  ["young", 278],
  ["talk", 279],
  ["soon", 280],
  ["list", 281],
  ["song", 282],
  ["being", 283],
  ["leave", 284],
  ["family", 285],
  ["music", 286],
  ["question", 287],
  ["process", 288],
  ["system", 289],
  ["complete", 290],
  ["wonder", 291],
  ["special", 292],
  ["measure", 293],
  ["product", 294],
  ["remember", 295],
  ["early", 296],
  ["waves", 297],
  ["reached", 298],
  ["listen", 299],
  ["course", 300],
  ["whole", 301],
  ["usually", 302],
  ["machine", 303],
  ["note", 304],
  ["nothing", 305],
  ["rather", 306],
  ["certain", 307],
  ["figure", 308],
  ["ground", 309],
  ["contain", 310],
  ["front", 311],
  ["order", 312],
  ["decide", 313],
  ["surface", 314],
  ["produce", 315],
  ["building", 316],
  ["develop", 317],
  ["pattern", 318],
  ["language", 319],
  ["science", 320],
  ["energy", 321],
  ["subject", 322],
  ["region", 323],
  ["record", 324],
  ["finished", 325],
  ["matter", 326],
  ["square", 327],
  ["simple", 328],
  ["several", 329],
  ["toward", 330],
  ["against", 331],
  ["numeral", 332],
  ["period", 333],
  ["perhaps", 334],
  ["report", 335],
  ["notice", 336],
  ["common", 337],
  ["straight", 338],
  ["suppose", 339],
  ["history", 340],
  ["interest", 341],
  ["possible", 342],
  ["distance", 343],
  ["although", 344],
  ["evidence", 345],
  ["discover", 346],
  ["remarkable", 347],
  ["structure", 348],
  ["knowledge", 349],
  ["material", 350],
  ["experience", 351],
  ["probable", 352],
  ["therefore", 353],
  ["resulting", 354],
  ["consider", 355],
  ["narrative", 356],
  ["attention", 357],
  ["literature", 358],
  ["necessary", 359],
  ["education", 360],
  ["community", 361],
  ["particular", 362],
  ["mechanism", 363],
  ["condition", 364],
  ["hypothesis", 365],
  ["phenomenon", 366],
  ["understanding", 367],
  ["observation", 368],
  ["significant", 369],
  ["information", 370],
  ["environment", 371],
  ["development", 372],
  ["explanation", 373],
  ["perspective", 374],
  ["relationship", 375],
  ["arrangement", 376],
  ["demonstrate", 377],
  ["temperature", 378],
  ["approximate", 379],
  ["investigate", 380],
  ["circumstance", 381],
  ["consequence", 382],
  ["theoretical", 383],
  ["fundamental", 384],
  ["concentration", 385],
  ["characteristic", 386],
  ["interpretation", 387],
  ["representation", 388],
  ["classification", 389],
  ["transformation", 390],
  ["responsibility", 391],
  ["administration", 392],
  ["recommendation", 393],
  ["acknowledgment", 394],
  ["approximately", 395],
  ["configuration", 396],
  ["comprehensive", 397],
  ["infrastructure", 398],
  ["accountability", 399],
  ["extraordinary", 400],
]);

export const VOCAB_SIZE = 401;

const EXPONENT = 1.05;
const SHIFT = 2.7;

let totalWeight = 0;
for (let i = 0; i < VOCAB_SIZE; i++) totalWeight += 1 / Math.pow(i + SHIFT, EXPONENT);

/** -log2 of the word's unigram probability under the bundled table. */
export function proxySurprisalBits(word: string): number {
  const rank = WORD_RANK.get(word.toLowerCase()) ?? VOCAB_SIZE;
  const p = 1 / Math.pow(rank + SHIFT, EXPONENT) / totalWeight;
  return -Math.log2(p);
}
