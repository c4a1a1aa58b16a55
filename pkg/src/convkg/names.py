"""Bundled word inventories for the fictive-organization generator."""
from __future__ import annotations

GIVEN_NAMES = (
    "Aaron", "Abigail", "Adam", "Adrian", "Aiden", "Alan", "Albert", "Alexa",
    "Alexander", "Alice", "Alicia", "Allison", "Amanda", "Amber", "Amelia",
    "Amy", "Andrea", "Andrew", "Angela", "Anna", "Anthony", "April", "Arthur",
    "Ashley", "Audrey", "Austin", "Barbara", "Beatrice", "Benjamin", "Beth",
    "Beverly", "Blake", "Bobby", "Bradley", "Brandon", "Brenda", "Brian",
    "Brittany", "Brooke", "Bruce", "Bryan", "Caleb", "Cameron", "Carl",
    "Carla", "Carmen", "Carol", "Caroline", "Carrie",
    "Catherine", "Cecilia", "Charles", "Charlotte", "Chelsea", "Cheryl",
    "Christian", "Christina", "Christopher", "Claire", "Clara", "Clifford",
    "Cody", "Colin", "Connor", "Craig", "Crystal", "Cynthia", "Dale", "Daniel",
    "Danielle", "Darlene", "David", "Dawn", "Deborah", "Dennis", "Derek",
    "Diana", "Diane", "Dominic", "Donald", "Donna", "Doris", "Dorothy",
    "Douglas", "Dylan", "Edith", "Edmund", "Edward", "Eleanor", "Elena",
    "Elijah", "Elizabeth", "Ellen", "Emily", "Emma", "Eric", "Erica", "Ethan",
    "Eugene", "Evelyn", "Felix", "Fiona", "Frances", "Frank", "Frederick",
    "Gabriel", "Gail", "Gary", "George", "Gerald", "Gina", "Gloria", "Grace",
    "Gregory", "Hannah", "Harold", "Harriet", "Harry", "Hazel", "Heather",
    "Helen", "Henry", "Holly", "Howard", "Hugh", "Ian", "Irene", "Isaac",
    "Isabel", "Jack", "Jacob", "Jacqueline", "James", "Jane", "Janet", "Janice",
    "Jared", "Jasmine", "Jason", "Jeffrey", "Jennifer", "Jeremy", "Jessica",
    "Joan", "Joanna", "Joel", "John", "Jonathan", "Jordan", "Joseph", "Joshua",
    "Joyce", "Judith", "Julia", "Julian", "Justin", "Karen", "Katherine",
    "Kathleen", "Keith", "Kelly", "Kenneth", "Kevin", "Kimberly", "Kyle",
    "Laura", "Lauren", "Lawrence", "Leah", "Leonard", "Lillian", "Linda",
    "Lisa", "Logan", "Lois", "Louis", "Lucas", "Lucy", "Luke", "Lydia",
    "Madeline", "Marcus", "Margaret", "Maria", "Marilyn", "Marion", "Mark",
    "Martha", "Martin", "Mary", "Mason", "Matthew", "Megan", "Melanie",
    "Melissa", "Michael", "Michelle", "Mildred", "Miranda", "Molly", "Monica",
    "Nancy", "Naomi", "Natalie", "Nathan", "Nicholas", "Nicole", "Noah",
    "Nora", "Norman", "Oliver", "Olivia", "Oscar", "Pamela", "Patricia",
    "Patrick", "Paul", "Paula", "Peter", "Philip", "Phyllis", "Rachel",
    "Ralph", "Randall", "Raymond", "Rebecca", "Regina", "Richard", "Rita",
    "Robert", "Roger", "Ronald", "Rose", "Roy", "Russell", "Ruth", "Ryan",
    "Samantha", "Samuel", "Sandra", "Sarah", "Scott", "Sean", "Sharon",
    "Shirley", "Simon", "Sophia", "Stanley", "Stephanie", "Stephen", "Steven",
    "Susan", "Sylvia", "Tamara", "Teresa", "Theodore", "Thomas", "Timothy",
    "Tracy", "Travis", "Tyler", "Valerie", "Vanessa", "Veronica", "Victor",
    "Victoria", "Vincent", "Violet", "Virginia", "Walter", "Wayne", "Wendy",
    "Wesley", "William", "Zachary", "Zoe",
)

FAMILY_NAMES = (
    "Adams", "Aguilar", "Alexander", "Allen", "Alvarez", "Anderson", "Andrews",
    "Armstrong", "Arnold", "Austin", "Bailey", "Baker", "Banks", "Barnes",
    "Barrett", "Bates", "Beck", "Bell", "Bennett", "Berry", "Bishop", "Black",
    "Blair", "Bowman", "Boyd", "Bradley", "Brewer", "Brooks", "Brown",
    "Bryant", "Burke", "Burns", "Burton", "Butler", "Caldwell", "Campbell",
    "Carlson", "Carpenter", "Carr", "Carroll", "Carter", "Castillo", "Castro",
    "Chambers", "Chapman", "Chavez", "Chen", "Clark", "Cole", "Coleman",
    "Collins", "Cook", "Cooper", "Cox", "Craig", "Crawford", "Cross", "Cruz",
    "Cunningham", "Curtis", "Daniels", "Davidson", "Davis", "Dawson", "Dean",
    "Delgado", "Diaz", "Dixon", "Douglas", "Doyle", "Duncan", "Dunn", "Edwards",
    "Elliott", "Ellis", "Estrada", "Evans", "Ferguson", "Fernandez", "Fields",
    "Fisher", "Fitzgerald", "Fleming", "Fletcher", "Flores", "Ford", "Foster",
    "Fowler", "Fox", "Francis", "Franklin", "Frazier", "Freeman", "Fuller",
    "Garcia", "Gardner", "Garner", "Garrett", "Garza", "George", "Gibson",
    "Gilbert", "Gomez", "Gonzalez", "Gordon", "Graham", "Grant", "Graves",
    "Gray", "Green", "Greene", "Gregory", "Griffin", "Gross", "Guerrero",
    "Gutierrez", "Hale", "Hall", "Hamilton", "Hansen", "Hanson", "Hardy",
    "Harmon", "Harper", "Harris", "Harrison", "Hart", "Harvey", "Hawkins",
    "Hayes", "Henderson", "Henry", "Hernandez", "Herrera", "Hicks", "Hill",
    "Hoffman", "Holland", "Holmes", "Holt", "Hopkins", "Howard", "Howell",
    "Hudson", "Hughes", "Hunt", "Hunter", "Ingram", "Jackson", "Jacobs",
    "James", "Jenkins", "Jennings", "Jensen", "Johnson", "Johnston", "Jones",
    "Jordan", "Joseph", "Keller", "Kelley", "Kelly", "Kennedy", "Kim", "King",
    "Knight", "Lambert", "Lane", "Larson", "Lawrence", "Lawson", "Lee",
    "Leonard", "Lewis", "Little", "Logan", "Long", "Lopez", "Love", "Lowe",
    "Lucas", "Lynch", "Lyons", "Mack", "Maldonado", "Malone", "Mann",
    "Manning", "Marsh", "Marshall", "Martin", "Martinez", "Mason", "Matthews",
    "Maxwell", "McCarthy", "McCoy", "McDonald", "McGee", "McKinney", "Medina",
    "Mendez", "Mendoza", "Meyer", "Miles", "Miller", "Mills", "Mitchell",
    "Montgomery", "Moore", "Morales", "Moran", "Moreno", "Morgan", "Morris",
    "Morrison", "Mullins", "Murphy", "Murray", "Myers", "Nelson", "Newman",
    "Nguyen", "Nichols", "Norris", "Norton", "Obrien", "Oliver", "Olson",
    "Ortega", "Ortiz", "Osborne", "Owen", "Owens", "Padilla", "Palmer",
    "Parker", "Parks", "Parsons", "Patel", "Patterson", "Patton", "Paul",
    "Payne", "Pearson", "Perez", "Perkins", "Perry", "Peters", "Peterson",
    "Phillips", "Pierce", "Porter", "Powell", "Powers", "Price", "Quinn",
    "Ramirez", "Ramos", "Ray", "Reed", "Reeves", "Reid", "Reyes", "Reynolds",
    "Rhodes", "Rice", "Richards", "Richardson", "Riley", "Rios", "Rivera",
    "Roberts", "Robertson", "Robinson", "Rodgers", "Rodriguez", "Rogers",
    "Romero", "Rose", "Ross", "Rowe", "Ruiz", "Russell", "Ryan", "Salazar",
    "Sanchez", "Sanders", "Sandoval", "Santos", "Schmidt", "Schneider",
    "Schroeder", "Schultz", "Scott", "Shaw", "Shelton", "Shields", "Silva",
    "Simmons", "Simpson", "Sims", "Singh", "Smith", "Snyder", "Soto",
    "Spencer", "Stanley", "Steele", "Stephens", "Stevens", "Stewart", "Stone",
    "Suarez", "Sullivan", "Sutton", "Swanson", "Taylor", "Terry", "Thomas",
    "Thompson", "Torres", "Townsend", "Tucker", "Turner", "Tyler", "Valdez",
    "Vargas", "Vasquez", "Vaughn", "Vega", "Wade", "Wagner", "Walker", "Wallace",
    "Walsh", "Walters", "Ward", "Warner", "Warren", "Washington", "Watkins",
    "Watson", "Watts", "Weaver", "Webb", "Weber", "Webster", "Wells", "West",
    "Wheeler", "White", "Wilkins", "Williams", "Williamson", "Willis",
    "Wilson", "Wise", "Wolfe", "Wood", "Woods", "Wright", "Yates", "Young",
    "Zimmerman",
)

JARGON = (
    "web-readiness", "users", "infrastructures", "methodologies", "synergy",
    "onboarding", "roadmap", "deliverables", "scalability", "benchmarking",
    "compliance", "procurement", "localization", "accessibility", "analytics",
    "automation", "architectures", "integrations", "migrations", "prototyping",
    "provisioning", "quality-assurance", "release-engineering", "resourcing",
    "security", "stakeholder", "sustainability", "telemetry", "usability",
    "vendor-alignment", "virtualization", "workflows", "interoperability",
    "observability", "partnerships", "forecasting",
)

MEETING_TYPES = (
    "workshop", "discussion", "status update", "review", "planning session",
    "retrospective", "briefing", "seminar", "standup", "sync",
)

CONFERENCE_ROOMS = (
    "Alpha Conference Room", "Beta Conference Room", "Gamma Conference Room",
    "Delta Conference Room", "Epsilon Conference Room", "Omega Conference Room",
    "Sigma Conference Room", "Zeta Conference Room",
)

GROUP_NAMES = (
    "Mathematics", "Physics", "Engineering", "Design", "Marketing",
    "Operations", "Research", "Finance", "Logistics", "Communications",
)
